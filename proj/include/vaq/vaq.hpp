#pragma once

#include "vaq/geometry.hpp"
#include "vaq/predicates.hpp"
#include "vaq/polygon.hpp"
#include "vaq/delaunay.hpp"
#include "vaq/rtree.hpp"
#include "vaq/query.hpp"
#include "vaq/svg.hpp"
#include "vaq/bench.hpp"
