#pragma once

#include "sparse_triangle/core.hpp"
#include "sparse_triangle/csv.hpp"
#include "sparse_triangle/experiments.hpp"
#include "sparse_triangle/parallel.hpp"
#include "sparse_triangle/shrinkage.hpp"
#include "sparse_triangle/solver.hpp"
#include "sparse_triangle/triangle.hpp"
