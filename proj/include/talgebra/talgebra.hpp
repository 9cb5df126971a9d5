#ifndef TALGEBRA_TALGEBRA_HPP
#define TALGEBRA_TALGEBRA_HPP

// Core library; the benchmark harness lives under talgebra/bench/.

#include "talgebra/compound.hpp"
#include "talgebra/error.hpp"
#include "talgebra/parallel.hpp"
#include "talgebra/tcore.hpp"
#include "talgebra/tmat.hpp"
#include "talgebra/tpca.hpp"
#include "talgebra/tpca_eval.hpp"
#include "talgebra/tpca_io.hpp"

#endif  // TALGEBRA_TALGEBRA_HPP
