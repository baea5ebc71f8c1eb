#pragma once

// Umbrella header for the monotone Q1 anisotropic diffusion solver.

#include "monofem/analysis.hpp"
#include "monofem/assembly.hpp"
#include "monofem/config.hpp"
#include "monofem/errors.hpp"
#include "monofem/lambda.hpp"
#include "monofem/mesh.hpp"
#include "monofem/monotone.hpp"
#include "monofem/problem.hpp"
#include "monofem/reference.hpp"
#include "monofem/solve.hpp"
#include "monofem/sparse.hpp"
#include "monofem/types.hpp"
