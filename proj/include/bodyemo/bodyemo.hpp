// Copyright 2026 The bodyemo Authors
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

#pragma once

// Umbrella header.

#include <bodyemo/skeleton.hpp>
#include <bodyemo/clip_io.hpp>
#include <bodyemo/preprocess.hpp>
#include <bodyemo/features.hpp>
#include <bodyemo/segmentation.hpp>
#include <bodyemo/representation.hpp>
#include <bodyemo/svm.hpp>
#include <bodyemo/ecoc.hpp>
#include <bodyemo/model.hpp>
#include <bodyemo/pipeline.hpp>
#include <bodyemo/eval.hpp>
#include <bodyemo/report.hpp>
#include <bodyemo/synth.hpp>
#include <bodyemo/stream.hpp>
#include <bodyemo/games.hpp>
#include <bodyemo/service.hpp>
