/*
 * Copyright (C) 2026 The scar-sched Authors
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
 *
*/

#ifndef SCAR__SCAR_HPP
#define SCAR__SCAR_HPP

#include <scar/errors.hpp>
#include <scar/gaussian.hpp>
#include <scar/road_network.hpp>
#include <scar/scenario.hpp>
#include <scar/prediction.hpp>
#include <scar/objectives.hpp>
#include <scar/search.hpp>
#include <scar/simulator.hpp>
#include <scar/experiment.hpp>

#endif // SCAR__SCAR_HPP
