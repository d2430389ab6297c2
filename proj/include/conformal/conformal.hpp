#pragma once

#include "conformal/cayley.hpp"
#include "conformal/certify.hpp"
#include "conformal/disprove.hpp"
#include "conformal/error.hpp"
#include "conformal/graph.hpp"
#include "conformal/io.hpp"
#include "conformal/matrix.hpp"
#include "conformal/pipeline.hpp"
#include "conformal/rational.hpp"
#include "conformal/spectral.hpp"
#include "conformal/structure.hpp"
