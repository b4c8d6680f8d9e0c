#pragma once

#include "latc/errors.hpp"
#include "latc/hecke.hpp"
#include "latc/io/basis_io.hpp"
#include "latc/io/json_writer.hpp"
#include "latc/ising/estimate.hpp"
#include "latc/ising/observables.hpp"
#include "latc/ising/rng.hpp"
#include "latc/ising/spin_lattice.hpp"
#include "latc/lattice/basis.hpp"
#include "latc/lattice/gauss.hpp"
#include "latc/lattice/iwasawa.hpp"
#include "latc/lattice/lll.hpp"
#include "latc/lattice/minima.hpp"
#include "latc/lattice/modular.hpp"
#include "latc/onsager.hpp"
#include "latc/parallel.hpp"
#include "latc/quadrature.hpp"
#include "latc/summation.hpp"
#include "latc/io/json_types.hpp"
