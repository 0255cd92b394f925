// Copyright 2026 The bell-lab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "core.hpp"
#include "errors.hpp"
#include "fit.hpp"
#include "models.hpp"
#include "montecarlo.hpp"
#include "nelder_mead.hpp"
#include "qubit.hpp"
#include "report_json.hpp"
#include "rng.hpp"
#include "scenario_json.hpp"
#include "signaling.hpp"
