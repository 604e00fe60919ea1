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

#include "hcf/serialization.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "hcf/errors.hpp"

namespace hcf {

namespace {

static_assert(std::endian::native == std::endian::little,
              "model container writes little-endian float64 arrays");
static_assert(std::numeric_limits<double>::is_iec559, "IEEE-754 doubles required");

constexpr char kMagic[4] = {'H', 'C', 'F', '1'};

using nlohmann::json;

size_t arrayElementCount(const json& header) {
  size_t total = 0;
  for (const auto& arr : header.at("arrays")) {
    size_t count = 1;
    for (const auto& d : arr.at("shape")) count *= d.get<size_t>();
    total += count;
  }
  return total;
}

void writeContainer(const std::string& path, const json& header,
                    std::span<const double> data) {
  if (arrayElementCount(header) != data.size()) {
    throw DataError("header shapes do not match the parameter count");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open model file for writing: " + path);
  const std::string headerText = header.dump();
  const uint32_t headerLen = static_cast<uint32_t>(headerText.size());
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&headerLen), sizeof(headerLen));
  out.write(headerText.data(), static_cast<std::streamsize>(headerText.size()));
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!out) throw DataError("failed writing model file: " + path);
}

json readHeader(std::ifstream& in, const std::string& path) {
  char magic[4];
  uint32_t headerLen = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&headerLen), sizeof(headerLen));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("not a model container: " + path);
  }
  std::string headerText(headerLen, '\0');
  in.read(headerText.data(), headerLen);
  if (!in) throw DataError("truncated model header: " + path);
  json header = json::parse(headerText, nullptr, false);
  if (header.is_discarded()) throw DataError("malformed model header: " + path);
  return header;
}

struct Container {
  json header;
  std::vector<double> data;
};

Container readContainer(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  Container c;
  c.header = readHeader(in, path);
  c.data.resize(arrayElementCount(c.header));
  in.read(reinterpret_cast<char*>(c.data.data()),
          static_cast<std::streamsize>(c.data.size() * sizeof(double)));
  if (!in) throw DataError("truncated model data: " + path);
  return c;
}

ModelKind kindFromName(const std::string& name, const std::string& path) {
  if (name == "hcf") return ModelKind::kHcf;
  if (name == "mf_bpr") return ModelKind::kMfBpr;
  if (name == "mf_implicit") return ModelKind::kMfImplicit;
  if (name == "historical") return ModelKind::kHistorical;
  throw DataError("unknown model kind '" + name + "' in " + path);
}

}  // namespace

std::string modelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kHcf: return "hcf";
    case ModelKind::kMfBpr: return "mf_bpr";
    case ModelKind::kMfImplicit: return "mf_implicit";
    case ModelKind::kHistorical: return "historical";
  }
  throw ConfigError("unhandled model kind");
}

namespace {

void attachVocab(json& header, const Vocabulary& vocab) {
  if (vocab.userNames.empty() && vocab.itemNames.empty()) return;
  header["user_names"] = vocab.userNames;
  header["item_names"] = vocab.itemNames;
}

Vocabulary readVocab(const json& header) {
  Vocabulary vocab;
  if (header.contains("user_names")) {
    vocab.userNames = header.at("user_names").get<std::vector<std::string>>();
    vocab.itemNames = header.at("item_names").get<std::vector<std::string>>();
  }
  return vocab;
}

}  // namespace

void saveHcfModel(const HcfModel& model, const std::string& path,
                  const Vocabulary& vocab) {
  const auto& cfg = model.config();
  const size_t tableCount =
      (static_cast<size_t>(cfg.numUsers) + cfg.numItems) * cfg.dim;
  const size_t blockCount = (model.parameters().size() - tableCount) / 2;
  json header = {
      {"kind", "hcf"},
      {"num_users", cfg.numUsers},
      {"num_items", cfg.numItems},
      {"dim", cfg.dim},
      {"history_capacity", cfg.historyCapacity},
      {"hidden_channels", cfg.hiddenChannels},
      {"stop_history_gradient", cfg.stopHistoryGradient},
      {"seed", cfg.seed},
      {"arrays",
       {{{"name", "user_embeddings"}, {"shape", {cfg.numUsers, cfg.dim}}},
        {{"name", "item_embeddings"}, {"shape", {cfg.numItems, cfg.dim}}},
        {{"name", "user_block"}, {"shape", {blockCount}}},
        {{"name", "item_block"}, {"shape", {blockCount}}}}},
  };
  attachVocab(header, vocab);
  writeContainer(path, header, model.parameters());
}

HcfModel loadHcfModel(const std::string& path) {
  const Container c = readContainer(path);
  if (c.header.at("kind") != "hcf") throw DataError("expected an hcf model: " + path);
  HcfModel::Config cfg;
  cfg.numUsers = c.header.at("num_users").get<int>();
  cfg.numItems = c.header.at("num_items").get<int>();
  cfg.dim = c.header.at("dim").get<int>();
  cfg.historyCapacity = c.header.at("history_capacity").get<int>();
  cfg.hiddenChannels = c.header.at("hidden_channels").get<std::vector<int>>();
  cfg.stopHistoryGradient = c.header.at("stop_history_gradient").get<bool>();
  cfg.seed = c.header.at("seed").get<uint64_t>();
  HcfModel model(cfg);
  if (model.parameters().size() != c.data.size()) {
    throw DataError("model shape does not match stored parameters: " + path);
  }
  std::copy(c.data.begin(), c.data.end(), model.parameters().begin());
  return model;
}

void saveMfModel(const MfModel& model, const std::string& path,
                 const Vocabulary& vocab) {
  const auto& cfg = model.config();
  json header = {
      {"kind", cfg.objective == MfModel::Objective::kBpr ? "mf_bpr" : "mf_implicit"},
      {"num_users", cfg.numUsers},
      {"num_items", cfg.numItems},
      {"dim", cfg.dim},
      {"lambda", cfg.lambdaReg},
      {"alpha_conf", cfg.alphaConf},
      {"seed", cfg.seed},
      {"arrays",
       {{{"name", "user_factors"}, {"shape", {cfg.numUsers, cfg.dim}}},
        {{"name", "item_factors"}, {"shape", {cfg.numItems, cfg.dim}}}}},
  };
  attachVocab(header, vocab);
  writeContainer(path, header, model.parameters());
}

MfModel loadMfModel(const std::string& path) {
  const Container c = readContainer(path);
  const ModelKind kind = kindFromName(c.header.at("kind"), path);
  if (kind != ModelKind::kMfBpr && kind != ModelKind::kMfImplicit) {
    throw DataError("expected a matrix factorization model: " + path);
  }
  MfModel::Config cfg;
  cfg.numUsers = c.header.at("num_users").get<int>();
  cfg.numItems = c.header.at("num_items").get<int>();
  cfg.dim = c.header.at("dim").get<int>();
  cfg.objective = kind == ModelKind::kMfBpr ? MfModel::Objective::kBpr
                                            : MfModel::Objective::kImplicit;
  cfg.lambdaReg = c.header.at("lambda").get<double>();
  cfg.alphaConf = c.header.at("alpha_conf").get<double>();
  cfg.seed = c.header.at("seed").get<uint64_t>();
  MfModel model(cfg);
  if (model.parameters().size() != c.data.size()) {
    throw DataError("model shape does not match stored parameters: " + path);
  }
  std::copy(c.data.begin(), c.data.end(), model.parameters().begin());
  return model;
}

void saveHistoricalModel(const HistoricalModel& model, const std::string& path,
                         const Vocabulary& vocab) {
  const auto rows = model.countRows();
  std::vector<double> flat;
  flat.reserve(rows.size() * 3);
  for (const auto& row : rows) flat.insert(flat.end(), row.begin(), row.end());
  json header = {
      {"kind", "historical"},
      {"num_users", model.numUsers()},
      {"num_items", model.numItems()},
      {"arrays", {{{"name", "counts"}, {"shape", {rows.size(), 3}}}}},
  };
  attachVocab(header, vocab);
  writeContainer(path, header, flat);
}

HistoricalModel loadHistoricalModel(const std::string& path) {
  const Container c = readContainer(path);
  if (c.header.at("kind") != "historical") {
    throw DataError("expected a historical model: " + path);
  }
  std::vector<std::array<double, 3>> rows(c.data.size() / 3);
  for (size_t k = 0; k < rows.size(); ++k) {
    rows[k] = {c.data[3 * k], c.data[3 * k + 1], c.data[3 * k + 2]};
  }
  return HistoricalModel::fromCounts(c.header.at("num_users").get<int>(),
                                     c.header.at("num_items").get<int>(), rows);
}

ModelKind peekModelKind(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  const json header = readHeader(in, path);
  return kindFromName(header.at("kind"), path);
}

const Scorer& LoadedModel::scorer() const {
  if (hcf) return *hcf;
  if (mf) return *mf;
  if (historical) return *historical;
  throw DataError("empty loaded model");
}

LoadedModel loadModel(const std::string& path) {
  LoadedModel loaded;
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    const json header = readHeader(in, path);
    loaded.kind = kindFromName(header.at("kind"), path);
    loaded.vocab = readVocab(header);
  }
  switch (loaded.kind) {
    case ModelKind::kHcf:
      loaded.hcf = std::make_unique<HcfModel>(loadHcfModel(path));
      break;
    case ModelKind::kMfBpr:
    case ModelKind::kMfImplicit:
      loaded.mf = std::make_unique<MfModel>(loadMfModel(path));
      break;
    case ModelKind::kHistorical:
      loaded.historical = std::make_unique<HistoricalModel>(loadHistoricalModel(path));
      break;
  }
  return loaded;
}

}  // namespace hcf
