#pragma once

#include "wavechannel/dimension.hpp"
#include "wavechannel/errors.hpp"
#include "wavechannel/quadrature.hpp"
#include "wavechannel/sampled_line.hpp"
#include "wavechannel/radial_grid.hpp"
#include "wavechannel/profile.hpp"
#include "wavechannel/bessel.hpp"
#include "wavechannel/spectral_line.hpp"
#include "wavechannel/derivative.hpp"
#include "wavechannel/hilbert.hpp"
#include "wavechannel/half_integral.hpp"
#include "wavechannel/laplace.hpp"
#include "wavechannel/half_line.hpp"
#include "wavechannel/poly.hpp"
#include "wavechannel/spectral.hpp"
#include "wavechannel/radiation.hpp"
#include "wavechannel/radiation_maps.hpp"
#include "wavechannel/channel_energy.hpp"
#include "wavechannel/report.hpp"
#include "wavechannel/verify.hpp"
#include "wavechannel/io.hpp"
