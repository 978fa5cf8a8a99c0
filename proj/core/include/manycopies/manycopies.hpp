#pragma once

#include "manycopies/bath.hpp"
#include "manycopies/collapse.hpp"
#include "manycopies/config.hpp"
#include "manycopies/copy_space.hpp"
#include "manycopies/dynamics.hpp"
#include "manycopies/errors.hpp"
#include "manycopies/harmonics.hpp"
#include "manycopies/povm.hpp"
#include "manycopies/qmath.hpp"
#include "manycopies/sequential.hpp"
#include "manycopies/sorkin.hpp"
#include "manycopies/spectrum.hpp"
