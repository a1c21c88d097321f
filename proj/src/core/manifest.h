// src/core/manifest.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef LIDKIT_CORE_MANIFEST_H_
#define LIDKIT_CORE_MANIFEST_H_

#include <string>
#include <vector>

#include "core/types.h"

namespace lid {

// Reads a JSONL manifest: one object per line with fields `id` (string),
// `audio` (string, optional), `label` (string, optional), `duration`
// (seconds, optional). Label strings are resolved against `languages`
// (declared in the sidecar config, never inferred from the data).
// Order-preserving; every malformed line reports its line number.
std::vector<Utterance> ReadManifest(const std::string& path,
                                    const LanguageList& languages);

void WriteManifest(const std::string& path,
                   const std::vector<Utterance>& utterances,
                   const LanguageList& languages);

// Labeled subset of a manifest as id-aligned trial labels.
TrialLabels LabelsFromManifest(const std::vector<Utterance>& utterances);

}  // namespace lid

#endif  // LIDKIT_CORE_MANIFEST_H_
