#pragma once

#include "netinfer/config.hpp"
#include "netinfer/error.hpp"
#include "netinfer/graph.hpp"
#include "netinfer/harness.hpp"
#include "netinfer/inference.hpp"
#include "netinfer/io.hpp"
#include "netinfer/metrics.hpp"
#include "netinfer/netgen.hpp"
#include "netinfer/random.hpp"
#include "netinfer/samplers.hpp"
