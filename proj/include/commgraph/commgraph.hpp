#pragma once

#include <commgraph/er_baseline.hpp>
#include <commgraph/gf2.hpp>
#include <commgraph/graph.hpp>
#include <commgraph/group_model.hpp>
#include <commgraph/harness.hpp>
#include <commgraph/io.hpp>
#include <commgraph/rng.hpp>
