#ifndef MINTORUS_MINTORUS_HPP
#define MINTORUS_MINTORUS_HPP

#include "mintorus/elliptic.hpp"
#include "mintorus/errors.hpp"
#include "mintorus/floquet.hpp"
#include "mintorus/geometry.hpp"
#include "mintorus/lame.hpp"
#include "mintorus/legendre.hpp"
#include "mintorus/quadrature.hpp"
#include "mintorus/report.hpp"
#include "mintorus/sturm_liouville.hpp"
#include "mintorus/torus_spectrum.hpp"
#include "mintorus/verify.hpp"

#endif  // MINTORUS_MINTORUS_HPP
