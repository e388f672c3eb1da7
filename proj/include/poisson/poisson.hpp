// Copyright 2026 The Poissonization Workbench Authors
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

#ifndef POISSON_POISSON_HPP
#define POISSON_POISSON_HPP

#include "poisson/algebra.hpp"
#include "poisson/channels.hpp"
#include "poisson/entropy.hpp"
#include "poisson/gns.hpp"
#include "poisson/io.hpp"
#include "poisson/modular.hpp"
#include "poisson/moments.hpp"
#include "poisson/partitions.hpp"
#include "poisson/random.hpp"
#include "poisson/suite.hpp"
#include "poisson/words.hpp"

#endif  // POISSON_POISSON_HPP
