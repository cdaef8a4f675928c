// Copyright 2026 The Cobit Authors
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

#include <filesystem>
#include <string>

#include <json.hpp>

#include "cobit/code.h"
#include "cobit/compose.h"
#include "cobit/concentrate.h"
#include "cobit/protocol.h"
#include "cobit/resource.h"

namespace cobit {

using Json = nlohmann::json;

/// Schema identifiers written into every document.
inline constexpr const char *kProtocolSchema = "cobit.protocol/1";
inline constexpr const char *kPipelineSchema = "cobit.pipeline/1";
inline constexpr const char *kCodeSchema = "cobit.code/1";
inline constexpr const char *kDerivationSchema = "cobit.derivation/1";

/// Reads and parses a JSON file; throws SchemaError on I/O or syntax problems.
Json read_json_file(const std::filesystem::path &path);

// States: layout plus interleaved (re, im) amplitudes.
Json state_to_json(const QuantumState &s);
QuantumState state_from_json(const Json &j);
Json layout_to_json(const RegisterLayout &layout);
RegisterLayout layout_from_json(const Json &j);

// Protocol files. Parse errors and broken protocol invariants raise SchemaError.
Json protocol_to_json(const MessageProtocol &p);
MessageProtocol protocol_from_json(const Json &j);

Json code_to_json(const BlockCode &code);
BlockCode code_from_json(const Json &j);

/// Pipeline configs reference their protocol inline or by a path relative to `base_dir`.
PipelineConfig pipeline_from_json(const Json &j, const std::filesystem::path &base_dir);
Json pipeline_to_json(const PipelineConfig &cfg);

Json ledger_to_json(const Ledger &l);
Json transcript_to_json(const Transcript &t);
Json concentration_to_json(const ConcentrationReport &r);
Json accounting_to_json(const AccountingReport &r);
Json gamma_to_json(const GammaDecomposition &g);

DerivationScript derivation_from_json(const Json &j);
Json derivation_to_json(const DerivationScript &s);
Json verdict_to_json(const Verdict &v, const std::string &script_name);
Json resource_point_to_json(const ResourcePoint &p);
Json identity_report_to_json(const IdentityReport &r);

/// Doubles that may be infinite are written as null.
Json finite_or_null(double x);

}  // namespace cobit
