#pragma once

#include "circular_map.hpp"
#include "cohomology.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "laplacian.hpp"
#include "lp_optimizer.hpp"
#include "pca.hpp"
#include "pipeline.hpp"
#include "rips.hpp"
#include "svg.hpp"
