/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#pragma once

#include "bench.hpp"
#include "compensated_sum.hpp"
#include "csv_io.hpp"
#include "experiment_config.hpp"
#include "generators.hpp"
#include "msm.hpp"
#include "point.hpp"
#include "rng.hpp"
#include "similarity_join.hpp"
#include "sliding_window.hpp"
