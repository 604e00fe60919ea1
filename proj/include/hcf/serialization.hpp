/*
 * Copyright 2026 the HCF authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <memory>
#include <string>

#include "hcf/baselines.hpp"
#include "hcf/hcf_model.hpp"

namespace hcf {

// Model files carry the training vocabularies so a saved model's dense ids
// can be matched to fresh data by name.
struct Vocabulary {
  std::vector<std::string> userNames;
  std::vector<std::string> itemNames;
};

// Container: "HCF1" magic, little-endian uint32 header length, a JSON
// header (kind, shapes, config echo, vocabularies, named array list), then
// the listed arrays as row-major little-endian float64, in header order.
// The exact layout is documented in the README so other languages can read
// it.
void saveHcfModel(const HcfModel& model, const std::string& path,
                  const Vocabulary& vocab = {});
void saveMfModel(const MfModel& model, const std::string& path,
                 const Vocabulary& vocab = {});
void saveHistoricalModel(const HistoricalModel& model, const std::string& path,
                         const Vocabulary& vocab = {});

HcfModel loadHcfModel(const std::string& path);
MfModel loadMfModel(const std::string& path);
HistoricalModel loadHistoricalModel(const std::string& path);

enum class ModelKind { kHcf, kMfBpr, kMfImplicit, kHistorical };

std::string modelKindName(ModelKind kind);

// Reads only the header.
ModelKind peekModelKind(const std::string& path);

// Kind-dispatched load for CLI use; exactly one model member is set.
struct LoadedModel {
  ModelKind kind = ModelKind::kHcf;
  std::unique_ptr<HcfModel> hcf;
  std::unique_ptr<MfModel> mf;
  std::unique_ptr<HistoricalModel> historical;
  Vocabulary vocab;

  const Scorer& scorer() const;
};

LoadedModel loadModel(const std::string& path);

}  // namespace hcf
