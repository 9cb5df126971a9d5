#ifndef TALGEBRA_HPP
#define TALGEBRA_HPP

#include "talgebra/compound.hpp"
#include "talgebra/error.hpp"
#include "talgebra/fourier_store.hpp"
#include "talgebra/linalg.hpp"
#include "talgebra/parallel.hpp"
#include "talgebra/tcore.hpp"
#include "talgebra/tmat.hpp"
#include "talgebra/tpca.hpp"
#include "talgebra/tpca_eval.hpp"
#include "talgebra/tpca_io.hpp"

#endif  // TALGEBRA_HPP
