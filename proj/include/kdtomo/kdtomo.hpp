// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header pulling in the whole library.

#pragma once

#include "kdtomo/hilbert.hpp"
#include "kdtomo/tables.hpp"
#include "kdtomo/clone.hpp"
#include "kdtomo/kd.hpp"
#include "kdtomo/pointer_model.hpp"
#include "kdtomo/io.hpp"
#include "kdtomo/verify.hpp"
