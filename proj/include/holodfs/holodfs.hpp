#pragma once

// Convenience umbrella. Individual headers stay usable on their own.

#include "holodfs/linalg.hpp"
#include "holodfs/qubits.hpp"
#include "holodfs/dfs.hpp"
#include "holodfs/gates.hpp"
#include "holodfs/noise.hpp"
#include "holodfs/sampling.hpp"
#include "holodfs/config.hpp"
#include "holodfs/report.hpp"
#include "holodfs/experiments.hpp"
#include "holodfs/selftest.hpp"
#include "holodfs/version.hpp"
