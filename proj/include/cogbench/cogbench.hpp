#pragma once

#include "cogbench/agents/llm_endpoint.hpp"
#include "cogbench/agents/oracle.hpp"
#include "cogbench/agents/prompt_modes.hpp"
#include "cogbench/core/episode.hpp"
#include "cogbench/core/parse.hpp"
#include "cogbench/core/transcript_io.hpp"
#include "cogbench/envs/factory.hpp"
#include "cogbench/metrics/report.hpp"
#include "cogbench/numopt/optimize.hpp"
#include "cogbench/numopt/regression.hpp"
#include "cogbench/runner/recovery.hpp"
#include "cogbench/runner/run.hpp"
