#ifndef ADIASIM_ADIASIM_HPP
#define ADIASIM_ADIASIM_HPP

// Umbrella header.

#include "adiasim/errors.hpp"
#include "adiasim/experiment.hpp"
#include "adiasim/hermitian.hpp"
#include "adiasim/path.hpp"
#include "adiasim/perturbation.hpp"
#include "adiasim/protocol.hpp"
#include "adiasim/rng.hpp"
#include "adiasim/serialize.hpp"
#include "adiasim/spectra.hpp"

#endif  // ADIASIM_ADIASIM_HPP
