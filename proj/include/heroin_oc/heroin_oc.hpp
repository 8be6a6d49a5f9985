/*
* Copyright (C) 2026 heroin-oc contributors
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

#include "heroin_oc/cubic.hpp"
#include "heroin_oc/equilibria.hpp"
#include "heroin_oc/errors.hpp"
#include "heroin_oc/io.hpp"
#include "heroin_oc/model.hpp"
#include "heroin_oc/optimal_control.hpp"
#include "heroin_oc/params.hpp"
#include "heroin_oc/report.hpp"
#include "heroin_oc/rk4.hpp"
#include "heroin_oc/scenario.hpp"
#include "heroin_oc/sensitivity.hpp"
#include "heroin_oc/stability.hpp"
