//
// Copyright 2026 The Evoke Authors
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
//

#pragma once

#include "evoke/adversarial.hpp"
#include "evoke/author.hpp"
#include "evoke/backend.hpp"
#include "evoke/core.hpp"
#include "evoke/errors.hpp"
#include "evoke/evaluator.hpp"
#include "evoke/http_backend.hpp"
#include "evoke/io.hpp"
#include "evoke/orchestrator.hpp"
#include "evoke/report.hpp"
#include "evoke/reviewer.hpp"
#include "evoke/scripted_backend.hpp"
#include "evoke/selector.hpp"
