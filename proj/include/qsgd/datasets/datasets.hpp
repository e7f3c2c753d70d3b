// Copyright 2026 The qsgd authors
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

#include <string>
#include <vector>

#include "qsgd/ansatz/ansatz.hpp"
#include "qsgd/qcore/rng.hpp"

namespace qsgd::datasets {

/// Random density matrix from the Ginibre ensemble: rho = G G^dagger / tr,
/// G complex standard normal.
CMatrix ginibre_density(int dim, RngStream& rng);

/// Photonics-style 2-qubit dataset: (phi_u, -1), (phi_{+v}, +1), (phi_{-v}, +1)
/// with probability 1/3 each and fresh (u, v) uniform on [0,1]^2 per sample;
/// phi_u = sqrt(1-u^2)|00> + u|10>, phi_{+-v} = +-sqrt(1-v^2)|01> + v|10>.
/// States are extended with the |00> ancilla pair to the 4-qubit circuit input.
LabeledSample sample_exp1(RngStream& rng);

enum class Exp2Variant { as_written, bell };
Exp2Variant exp2_variant_from_name(const std::string& name);
std::string exp2_variant_name(Exp2Variant v);

/// Separable vs entangled discrimination, 50/50: label -1 is a product of two
/// single-qubit Ginibre densities; label +1 is the fixed target state —
/// `as_written` normalizes the equal-superposition state (which is the product
/// |+>|+>), `bell` uses (|00> + |11>)/sqrt(2). Extended with |00> ancillas.
LabeledSample sample_exp2(RngStream& rng, Exp2Variant variant);

/// GHZ (+1) vs fully separable 4-fold Ginibre products (-1), 50/50.
LabeledSample sample_exp3(RngStream& rng);

std::vector<LabeledSample> gen_exp1(int n, RngStream& rng);
std::vector<LabeledSample> gen_exp2(int n, RngStream& rng, Exp2Variant variant);
std::vector<LabeledSample> gen_exp3(int n, RngStream& rng);

struct ExperimentSpec {
  std::string id;
  int num_qubits = 0;
  AnsatzSpec ansatz;
  Povm povm;
  int locality = 0;  // POVM support size
};

/// Known ids: exp1, exp2, exp2-bell, exp3. exp1/exp2 use the three-perceptron
/// QNN (48 parameters, readout POVM on the last two qubits); exp3 is the
/// single-layer product over all 256 4-qubit Pauli strings.
ExperimentSpec experiment_spec(const std::string& id);

/// Sampler for the experiment's dataset as a closure over its own stream.
std::function<LabeledSample()> make_stream(const std::string& id, RngStream rng);
std::vector<LabeledSample> make_batch(const std::string& id, int n, RngStream rng);

/// Binary dump: 16-byte header (magic "QSGDDATA", u16 version, u16 d,
/// u32 count, little endian), then per sample the dense density matrix
/// (row-major, f64 interleaved re/im, little endian) and the label as i8.
void dump_samples(const std::string& path, std::span<const LabeledSample> samples);
std::vector<LabeledSample> load_samples(const std::string& path);

}  // namespace qsgd::datasets
