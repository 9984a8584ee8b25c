// Copyright 2026 The qec832 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qec832/pauli.hpp"
#include "qec832/code.hpp"
#include "qec832/circuit.hpp"
#include "qec832/random.hpp"
#include "qec832/statevector.hpp"
#include "qec832/reference_circuits.hpp"
#include "qec832/verifier.hpp"
#include "qec832/noise.hpp"
#include "qec832/harness.hpp"
