#pragma once

// Umbrella header: the whole public surface of the library.

#include "gwsflow/boundary.hpp"
#include "gwsflow/catalog.hpp"
#include "gwsflow/classify.hpp"
#include "gwsflow/flow.hpp"
#include "gwsflow/geometry.hpp"
#include "gwsflow/integrate.hpp"
#include "gwsflow/io.hpp"
#include "gwsflow/params.hpp"
#include "gwsflow/rational.hpp"
#include "gwsflow/signpoly.hpp"
#include "gwsflow/verify.hpp"
#include "gwsflow/version.hpp"
