#pragma once

#include "scatnet/classify.hpp"
#include "scatnet/distribution.hpp"
#include "scatnet/error.hpp"
#include "scatnet/frame.hpp"
#include "scatnet/io.hpp"
#include "scatnet/learn.hpp"
#include "scatnet/network.hpp"
#include "scatnet/partition.hpp"
#include "scatnet/random.hpp"
#include "scatnet/scatter.hpp"
#include "scatnet/verify.hpp"
