// Copyright 2026 The bosonkit Authors
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

#include "bosonkit/characterization.hpp"
#include "bosonkit/combinatorics.hpp"
#include "bosonkit/distribution.hpp"
#include "bosonkit/error.hpp"
#include "bosonkit/events.hpp"
#include "bosonkit/io.hpp"
#include "bosonkit/occupation.hpp"
#include "bosonkit/parallel.hpp"
#include "bosonkit/permanent.hpp"
#include "bosonkit/random.hpp"
#include "bosonkit/sampling.hpp"
#include "bosonkit/unitary.hpp"
#include "bosonkit/validation.hpp"
