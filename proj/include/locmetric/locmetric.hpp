// Copyright 2026 The locmetric Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "locmetric/chain.hpp"
#include "locmetric/errors.hpp"
#include "locmetric/format.hpp"
#include "locmetric/geometry.hpp"
#include "locmetric/monte_carlo.hpp"
#include "locmetric/parallel.hpp"
#include "locmetric/report_io.hpp"
#include "locmetric/rho.hpp"
#include "locmetric/rng.hpp"
#include "locmetric/sphere_metric.hpp"
#include "locmetric/verify.hpp"
