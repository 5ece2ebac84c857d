#pragma once

// Umbrella header: numerical toolkit for the resonant two-atom/one-mode
// cavity model and the coherent-state-readout Bell-measurement protocol.

#include "tcbell/types.hpp"
#include "tcbell/fock.hpp"
#include "tcbell/atomic.hpp"
#include "tcbell/joint.hpp"
#include "tcbell/dynamics.hpp"
#include "tcbell/overlaps.hpp"
#include "tcbell/approx.hpp"
#include "tcbell/wigner.hpp"
#include "tcbell/protocol.hpp"
#include "tcbell/csv.hpp"
#include "tcbell/run_config.hpp"
