#pragma once

// Umbrella header.

#include "fsmt/bench.hpp"
#include "fsmt/coverage.hpp"
#include "fsmt/defects.hpp"
#include "fsmt/error.hpp"
#include "fsmt/fsmt_strategy.hpp"
#include "fsmt/manifest.hpp"
#include "fsmt/metrics.hpp"
#include "fsmt/model.hpp"
#include "fsmt/modelgen.hpp"
#include "fsmt/nsr_strategy.hpp"
#include "fsmt/path.hpp"
#include "fsmt/stats.hpp"
