#pragma once

#include "quasikit/error.hpp"
#include "quasikit/sequence.hpp"
#include "quasikit/series.hpp"
#include "quasikit/jet.hpp"
#include "quasikit/lab.hpp"
#include "quasikit/bang.hpp"
#include "quasikit/gontcharoff.hpp"
#include "quasikit/weight.hpp"
