#pragma once

#include "cusp_atlas/arith.hpp"
#include "cusp_atlas/construct.hpp"
#include "cusp_atlas/cusp.hpp"
#include "cusp_atlas/errors.hpp"
#include "cusp_atlas/hilbert_oracle.hpp"
#include "cusp_atlas/matrix.hpp"
#include "cusp_atlas/qform.hpp"
#include "cusp_atlas/quat.hpp"
#include "cusp_atlas/unipotent.hpp"
