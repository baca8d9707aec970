#pragma once

#include "affine_map.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "filter_bank.hpp"
#include "ifs.hpp"
#include "laurent.hpp"
#include "measure.hpp"
