#pragma once

#include "amk/grid.hpp"
#include "amk/fft.hpp"
#include "amk/partition.hpp"
#include "amk/modulation.hpp"
#include "amk/sampling.hpp"
#include "amk/total_boundedness.hpp"
#include "amk/kernel.hpp"
#include "amk/gabor.hpp"
#include "amk/fixtures.hpp"
