#pragma once

#include "krylov/arnoldi.hpp"
#include "krylov/cg.hpp"
#include "krylov/csr.hpp"
#include "krylov/dense.hpp"
#include "krylov/generators.hpp"
#include "krylov/gmres.hpp"
#include "krylov/matrix_market.hpp"
#include "krylov/oracles.hpp"
#include "krylov/precond.hpp"
#include "krylov/solve_types.hpp"
