/*
 * Copyright 2026 The c3msv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include "c3msv/error.hpp"
#include "c3msv/symplectic.hpp"
#include "c3msv/gaussian_core.hpp"
#include "c3msv/steering.hpp"
#include "c3msv/decoherence.hpp"
#include "c3msv/polynomial.hpp"
#include "c3msv/quadrature.hpp"
#include "c3msv/wigner.hpp"
#include "c3msv/fock.hpp"
