#pragma once

#include "intent_bench/error.hpp"
#include "intent_bench/util.hpp"
#include "intent_bench/scalar.hpp"
#include "intent_bench/catalog.hpp"
#include "intent_bench/promptkit.hpp"
#include "intent_bench/backends.hpp"
#include "intent_bench/scoring.hpp"
#include "intent_bench/runner.hpp"
#include "intent_bench/report.hpp"
