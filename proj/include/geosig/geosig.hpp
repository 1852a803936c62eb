#pragma once

#include "geosig/channel.hpp"
#include "geosig/curvature.hpp"
#include "geosig/hausdorff.hpp"
#include "geosig/io.hpp"
#include "geosig/metrics.hpp"
#include "geosig/quality.hpp"
#include "geosig/quantize.hpp"
#include "geosig/reconstruct.hpp"
#include "geosig/rng.hpp"
#include "geosig/sampling.hpp"
#include "geosig/signal.hpp"
#include "geosig/triangulation.hpp"
#include "geosig/vec.hpp"
