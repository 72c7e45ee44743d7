#pragma once

#include "twomode_jc/core.hpp"
#include "twomode_jc/displace.hpp"
#include "twomode_jc/fock.hpp"
#include "twomode_jc/liealg.hpp"
#include "twomode_jc/linalg.hpp"
#include "twomode_jc/models.hpp"
#include "twomode_jc/parallel.hpp"
#include "twomode_jc/quadrature.hpp"
#include "twomode_jc/spectra.hpp"
#include "twomode_jc/spinor.hpp"
#include "twomode_jc/verify.hpp"
#include "twomode_jc/wavefunc.hpp"
