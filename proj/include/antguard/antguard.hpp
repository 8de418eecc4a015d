#pragma once

#include "antguard/core/types.hpp"
#include "antguard/dda/agent.hpp"
#include "antguard/dda/forward_log.hpp"
#include "antguard/dda/reliability.hpp"
#include "antguard/filter/dpa.hpp"
#include "antguard/filter/response.hpp"
#include "antguard/filter/tfa.hpp"
#include "antguard/metrics/emit.hpp"
#include "antguard/metrics/report.hpp"
#include "antguard/scenario/config.hpp"
#include "antguard/scenario/grid.hpp"
#include "antguard/scenario/parser.hpp"
#include "antguard/scenario/traffic.hpp"
#include "antguard/sim/energy.hpp"
#include "antguard/sim/event.hpp"
#include "antguard/sim/rng.hpp"
#include "antguard/sim/simulator.hpp"
#include "antguard/sim/topology.hpp"
#include "antguard/sim/trace.hpp"
