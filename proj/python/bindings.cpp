#include <optional>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "duet/duet.hpp"

namespace py = pybind11;
using namespace duet;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DenseMatrix to_dense(const Array& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::kInvalidInput, "expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return DenseMatrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

py::array_t<double> to_array(const DenseMatrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.values().begin(), m.values().end(), out.mutable_data());
  return out;
}

InteractionMatrix to_interactions(const Array& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::kInvalidInput, "X must be a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  std::vector<Entry> entries;
  const double* p = a.data();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = p[r * cols + c];
      if (v == 1.0) {
        entries.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c)});
      } else if (v != 0.0) {
        throw Error(ErrorCode::kInvalidInput, "X must be binary (0/1)");
      }
    }
  }
  return InteractionMatrix(rows, cols, std::move(entries));
}

py::array_t<double> interactions_to_array(const InteractionMatrix& x) {
  return to_array(x.dense_view());
}

std::vector<SideMatrix> sides_of(const std::vector<Array>& arrays, SideRole role,
                                 const InteractionMatrix& x) {
  std::vector<SideMatrix> out;
  for (const auto& a : arrays) {
    out.push_back(validate_side_matrix(to_dense(a), role, x.n_items(), x.n_users()));
  }
  return out;
}

Hyperparams make_hp(double lambda1, std::optional<double> lambda2, std::vector<double> betas,
                    std::vector<double> gammas) {
  Hyperparams hp;
  hp.lambda1 = lambda1;
  hp.lambda2 = lambda2.value_or(lambda1);
  hp.tie_lambdas = hp.lambda1 == hp.lambda2;
  hp.betas = std::move(betas);
  hp.gammas = std::move(gammas);
  return hp;
}

// Missing weights default to 1 per side.
std::vector<double> weights_or_ones(std::optional<std::vector<double>> w, std::size_t n) {
  return w ? *w : std::vector<double>(n, 1.0);
}

std::vector<std::uint8_t> to_labels(const std::vector<int>& labels) {
  return {labels.begin(), labels.end()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "DUET closed-form dual-regularized autoencoder";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "DuetError", PyExc_ValueError);

  py::class_<WeightModel>(m, "Model")
      .def_property_readonly("item_weights",
                             [](const WeightModel& w) -> py::object {
                               if (!w.item_weights()) return py::none();
                               return to_array(*w.item_weights());
                             })
      .def_property_readonly("user_weights",
                             [](const WeightModel& w) -> py::object {
                               if (!w.user_weights()) return py::none();
                               return to_array(*w.user_weights());
                             })
      .def_property_readonly("lambda1", [](const WeightModel& w) { return w.hyperparams().lambda1; })
      .def_property_readonly("lambda2", [](const WeightModel& w) { return w.hyperparams().lambda2; })
      .def_property_readonly("betas", [](const WeightModel& w) { return w.hyperparams().betas; })
      .def_property_readonly("gammas", [](const WeightModel& w) { return w.hyperparams().gammas; })
      .def_property_readonly("fingerprint", &WeightModel::fingerprint);

  m.def(
      "fit",
      [](const Array& x, const std::vector<Array>& item_sides, const std::vector<Array>& user_sides,
         double lambda1, std::optional<double> lambda2, std::optional<std::vector<double>> betas,
         std::optional<std::vector<double>> gammas, const std::string& method, unsigned threads) {
        const auto xi = to_interactions(x);
        const auto is = sides_of(item_sides, SideRole::kItemSide, xi);
        const auto us = sides_of(user_sides, SideRole::kUserSide, xi);
        const Hyperparams hp = make_hp(lambda1, lambda2, weights_or_ones(betas, is.size()),
                                       weights_or_ones(gammas, us.size()));
        FitOptions fo;
        fo.threads = threads;
        py::gil_scoped_release release;
        return fit_method(xi, is, us, hp, parse_method(method), fo);
      },
      py::arg("x"), py::arg("item_sides") = std::vector<Array>{},
      py::arg("user_sides") = std::vector<Array>{}, py::arg("lambda1") = 100.0,
      py::arg("lambda2") = py::none(), py::arg("betas") = py::none(),
      py::arg("gammas") = py::none(), py::arg("method") = "duet", py::arg("threads") = 1,
      "Fit weight matrices. X is a binary users x items array; item side matrices have one "
      "column per item, user side matrices one row per user.");

  m.def(
      "predict",
      [](const Array& x, const WeightModel& model, std::optional<std::string> mode,
         double mix_alpha) {
        const auto xi = to_interactions(x);
        ScoreMode sm = model.item_weights() && model.user_weights() ? ScoreMode::kAveraged
                       : model.item_weights()                       ? ScoreMode::kItemOnly
                                                                    : ScoreMode::kUserOnly;
        if (mode) sm = parse_score_mode(*mode);
        return to_array(predict(xi, model, sm, mix_alpha).scores);
      },
      py::arg("x"), py::arg("model"), py::arg("mode") = py::none(), py::arg("mix_alpha") = 0.5);

  m.def(
      "stationarity_residual",
      [](const Array& x, const Array& b, const std::vector<Array>& item_sides, double lambda1,
         std::optional<std::vector<double>> betas) {
        const auto xi = to_interactions(x);
        const auto is = sides_of(item_sides, SideRole::kItemSide, xi);
        const auto w = weights_or_ones(betas, is.size());
        return stationarity_residual(xi, is, lambda1, w, to_dense(b));
      },
      py::arg("x"), py::arg("b"), py::arg("item_sides") = std::vector<Array>{},
      py::arg("lambda1") = 100.0, py::arg("betas") = py::none());

  m.def(
      "jaccard_similarity",
      [](const Array& profiles) {
        DenseMatrix p = to_dense(profiles);
        std::vector<std::string> labels;
        for (std::size_t r = 0; r < p.rows(); ++r) labels.push_back(std::to_string(r));
        return to_array(jaccard_similarity(BinaryProfileSet(labels, std::move(p))).values);
      },
      py::arg("profiles"));

  m.def("aupr", [](const std::vector<double>& s, const std::vector<int>& l) {
    return aupr(s, to_labels(l));
  }, py::arg("scores"), py::arg("labels"));
  m.def("ndcg_at_k", [](const std::vector<double>& s, const std::vector<int>& l, long k) {
    return ndcg_at_k(s, to_labels(l), k);
  }, py::arg("scores"), py::arg("labels"), py::arg("k"));
  m.def("precision_at_k", [](const std::vector<double>& s, const std::vector<int>& l, long k) {
    return precision_at_k(s, to_labels(l), k);
  }, py::arg("scores"), py::arg("labels"), py::arg("k"));
  m.def("welch_t_test", [](const std::vector<double>& a, const std::vector<double>& b) {
    const auto r = welch_t_test(a, b);
    return py::dict(py::arg("t") = r.t, py::arg("p") = r.p, py::arg("df") = r.df);
  }, py::arg("a"), py::arg("b"));

  m.def(
      "cross_validate",
      [](const Array& x, const std::vector<Array>& item_sides, const std::vector<Array>& user_sides,
         double lambda1, std::optional<double> lambda2, std::optional<std::vector<double>> betas,
         std::optional<std::vector<double>> gammas, const std::string& method, std::size_t folds,
         std::size_t rounds, std::uint64_t seed, long k_ndcg, double mix_alpha) {
        const auto xi = to_interactions(x);
        const auto is = sides_of(item_sides, SideRole::kItemSide, xi);
        const auto us = sides_of(user_sides, SideRole::kUserSide, xi);
        const Method md = parse_method(method);
        Hyperparams hp = make_hp(lambda1, lambda2, weights_or_ones(betas, is.size()),
                                 weights_or_ones(gammas, us.size()));
        CvOptions opts;
        opts.k_ndcg = k_ndcg;
        opts.mix_alpha = mix_alpha;
        const FoldPlan plan = make_folds(xi, folds, rounds, seed);
        MetricReport r;
        {
          py::gil_scoped_release release;
          r = run_cv(xi, is, us, hp, plan, md, opts);
        }
        py::list rows;
        for (const auto& f : r.per_fold) {
          rows.append(py::dict(py::arg("round") = f.round, py::arg("fold") = f.fold,
                               py::arg("aupr") = f.aupr, py::arg("ndcg") = f.ndcg,
                               py::arg("prec50") = f.prec50, py::arg("prec100") = f.prec100));
        }
        return rows;
      },
      py::arg("x"), py::arg("item_sides") = std::vector<Array>{},
      py::arg("user_sides") = std::vector<Array>{}, py::arg("lambda1") = 100.0,
      py::arg("lambda2") = py::none(), py::arg("betas") = py::none(),
      py::arg("gammas") = py::none(), py::arg("method") = "duet", py::arg("folds") = 5,
      py::arg("rounds") = 3, py::arg("seed") = 42, py::arg("k_ndcg") = 100,
      py::arg("mix_alpha") = 0.5,
      "Repeated k-fold CV; returns one dict of metrics per (round, fold).");

  m.def(
      "load_dataset",
      [](const std::filesystem::path& manifest) {
        const Dataset d = load_dataset(load_manifest(manifest));
        py::list items, users;
        for (const auto& s : d.item_sides) items.append(to_array(s.matrix()));
        for (const auto& s : d.user_sides) users.append(to_array(s.matrix()));
        return py::dict(py::arg("x") = interactions_to_array(d.x),
                        py::arg("user_labels") = d.x.user_labels(),
                        py::arg("item_labels") = d.x.item_labels(), py::arg("item_sides") = items,
                        py::arg("user_sides") = users);
      },
      py::arg("manifest"));

  m.def("save_model", [](const WeightModel& model, const std::filesystem::path& path) {
    save_model(model, path);
  }, py::arg("model"), py::arg("path"));
  m.def("load_model", [](const std::filesystem::path& path) { return load_model(path); },
        py::arg("path"));
}
