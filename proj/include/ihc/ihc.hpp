#ifndef IHC_IHC_HPP
#define IHC_IHC_HPP

#include "ihc/corr.hpp"
#include "ihc/errors.hpp"
#include "ihc/hc.hpp"
#include "ihc/io.hpp"
#include "ihc/matrix.hpp"
#include "ihc/rng.hpp"
#include "ihc/signal.hpp"
#include "ihc/simlab.hpp"
#include "ihc/spectral.hpp"
#include "ihc/svg.hpp"

#endif // IHC_IHC_HPP
