#pragma once

#include <routelab/compact.hpp>
#include <routelab/csv.hpp>
#include <routelab/error.hpp>
#include <routelab/graph.hpp>
#include <routelab/harness.hpp>
#include <routelab/metrics.hpp>
#include <routelab/route_path.hpp>
#include <routelab/shortest_path.hpp>
#include <routelab/stacked.hpp>
#include <routelab/topology.hpp>
