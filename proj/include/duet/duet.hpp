#pragma once

#include "duet/cross_validation.hpp"
#include "duet/dense_matrix.hpp"
#include "duet/error.hpp"
#include "duet/interaction_matrix.hpp"
#include "duet/io.hpp"
#include "duet/linalg.hpp"
#include "duet/metrics.hpp"
#include "duet/model.hpp"
#include "duet/side_similarity.hpp"
#include "duet/synthetic.hpp"
#include "duet/tuning.hpp"
#include "duet/version.hpp"
