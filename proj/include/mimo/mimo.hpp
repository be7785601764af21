// SPDX-License-Identifier: Apache-2.0
//
// mimo-manifold: array-independent MIMO channel models via manifold decomposition
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#pragma once

#include "mimo/arrays.hpp"
#include "mimo/config.hpp"
#include "mimo/core.hpp"
#include "mimo/ensemble.hpp"
#include "mimo/experiment.hpp"
#include "mimo/io.hpp"
#include "mimo/manifold.hpp"
#include "mimo/metrics.hpp"
#include "mimo/models.hpp"
#include "mimo/parallel.hpp"
#include "mimo/presets.hpp"
#include "mimo/rng.hpp"
#include "mimo/scattering.hpp"
#include "mimo/vcr.hpp"
