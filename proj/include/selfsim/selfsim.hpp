#pragma once

#include "selfsim/algebra.hpp"
#include "selfsim/error.hpp"
#include "selfsim/group.hpp"
#include "selfsim/hecke.hpp"
#include "selfsim/intervals.hpp"
#include "selfsim/renorm.hpp"
#include "selfsim/schreier.hpp"
#include "selfsim/spectra.hpp"
#include "selfsim/word.hpp"
