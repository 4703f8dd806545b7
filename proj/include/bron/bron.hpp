#pragma once

#include "bron/analytics.hpp"
#include "bron/error.hpp"
#include "bron/features.hpp"
#include "bron/graph.hpp"
#include "bron/harness.hpp"
#include "bron/ingest.hpp"
#include "bron/learn/metrics.hpp"
#include "bron/learn/model.hpp"
#include "bron/learn/stats.hpp"
#include "bron/report.hpp"
