#ifndef GCORR_GCORR_HPP
#define GCORR_GCORR_HPP

#include "gcorr/catalog.hpp"
#include "gcorr/cohomology.hpp"
#include "gcorr/composition.hpp"
#include "gcorr/correspondence.hpp"
#include "gcorr/cstar.hpp"
#include "gcorr/error.hpp"
#include "gcorr/groupoid.hpp"
#include "gcorr/groups.hpp"
#include "gcorr/io.hpp"
#include "gcorr/measures.hpp"
#include "gcorr/random.hpp"
#include "gcorr/report.hpp"
#include "gcorr/rng.hpp"
#include "gcorr/scalar.hpp"

#endif  // GCORR_GCORR_HPP
