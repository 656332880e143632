#pragma once

#include "depthgf/color.hpp"
#include "depthgf/denoise.hpp"
#include "depthgf/error.hpp"
#include "depthgf/fir.hpp"
#include "depthgf/graph.hpp"
#include "depthgf/image.hpp"
#include "depthgf/io.hpp"
#include "depthgf/laplacian.hpp"
#include "depthgf/metrics.hpp"
#include "depthgf/noise.hpp"
#include "depthgf/resample.hpp"
#include "depthgf/spectral.hpp"
#include "depthgf/synthetic.hpp"
#include "depthgf/config.hpp"
#include "depthgf/bench.hpp"
