// src/core/embedding_io.h

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

#ifndef LIDKIT_CORE_EMBEDDING_IO_H_
#define LIDKIT_CORE_EMBEDDING_IO_H_

#include <string>
#include <vector>

#include "core/types.h"

namespace lid {

// Binary embedding file: magic "LIDE", u32 version=1, u32 N, u32 D, then
// N*D little-endian f32 row-major. Values are stored in f32
// (training-scale fidelity) and promoted to f64 in memory, where all
// backend math runs. The file carries no ids; rows pair positionally with
// the lines of the manifest the file was extracted from (see BindManifest).
void WriteEmbeddings(const std::string& path, const EmbeddingSet& set);
EmbeddingSet ReadEmbeddings(const std::string& path);

// Attaches manifest ids (and labels, where present) to a freshly read
// embedding set; row i corresponds to manifest line i.
void BindManifest(EmbeddingSet* set, const std::vector<Utterance>& utterances);

}  // namespace lid

#endif  // LIDKIT_CORE_EMBEDDING_IO_H_
