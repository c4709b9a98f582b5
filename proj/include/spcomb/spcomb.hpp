#pragma once

#include "spcomb/configuration.hpp"
#include "spcomb/difference.hpp"
#include "spcomb/errors.hpp"
#include "spcomb/factorial.hpp"
#include "spcomb/identities.hpp"
#include "spcomb/k_transform.hpp"
#include "spcomb/kernel.hpp"
#include "spcomb/numeric.hpp"
#include "spcomb/observable.hpp"
#include "spcomb/parallel.hpp"
#include "spcomb/point.hpp"
#include "spcomb/point_process.hpp"
#include "spcomb/random.hpp"
#include "spcomb/serialization.hpp"
#include "spcomb/stirling.hpp"
#include "spcomb/test_function.hpp"
