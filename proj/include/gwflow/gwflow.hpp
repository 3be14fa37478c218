// Copyright 2026 The gwflow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header: the whole library except the CLI (include
// gwflow/cli.hpp separately, it pulls in CLI11).

#ifndef GWFLOW_GWFLOW_HPP
#define GWFLOW_GWFLOW_HPP

#include "gwflow/types.hpp"
#include "gwflow/rng.hpp"
#include "gwflow/fft.hpp"
#include "gwflow/sha256.hpp"
#include "gwflow/stats_math.hpp"

#include "gwflow/noise.hpp"
#include "gwflow/waveform.hpp"
#include "gwflow/strain_io.hpp"

#include "gwflow/psd.hpp"
#include "gwflow/filter.hpp"
#include "gwflow/triggers.hpp"
#include "gwflow/coinc.hpp"

#include "gwflow/config.hpp"
#include "gwflow/dag.hpp"
#include "gwflow/plan.hpp"
#include "gwflow/engine.hpp"
#include "gwflow/report.hpp"
#include "gwflow/stages.hpp"
#include "gwflow/svg.hpp"

#endif  // GWFLOW_GWFLOW_HPP
