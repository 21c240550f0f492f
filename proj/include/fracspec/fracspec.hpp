#pragma once

#include "fracspec/caputo.hpp"
#include "fracspec/errors.hpp"
#include "fracspec/euclidean_multiplier.hpp"
#include "fracspec/evolution.hpp"
#include "fracspec/gamma.hpp"
#include "fracspec/mittag_leffler.hpp"
#include "fracspec/oracle_compare.hpp"
#include "fracspec/spectral_operator.hpp"
