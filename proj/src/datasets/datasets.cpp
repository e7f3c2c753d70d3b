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

#include "qsgd/datasets/datasets.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qsgd::datasets {

namespace {

Ket ancilla_00() {
  Ket k(4);
  k.amp[0] = 1.0;
  return k;
}

Ket basis_ket(int dim, int index) {
  Ket k(dim);
  k.amp[index] = 1.0;
  return k;
}

// All 16 two-qubit Pauli strings on (q, q+1) embedded in a d-qubit register,
// lexicographic in (first letter, second letter).
std::vector<PauliString> perceptron_generators(int num_qubits, int q) {
  std::vector<PauliString> gens;
  gens.reserve(16);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      PauliString s = PauliString::identity(num_qubits);
      s.letters[q] = static_cast<uint8_t>(a);
      s.letters[q + 1] = static_cast<uint8_t>(b);
      gens.push_back(std::move(s));
    }
  return gens;
}

}  // namespace

CMatrix ginibre_density(int dim, RngStream& rng) {
  CMatrix g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = cdouble(re, im);
    }
  CMatrix rho = g * g.adjoint();
  const double tr = rho.trace().real();
  rho *= 1.0 / tr;
  return rho;
}

LabeledSample sample_exp1(RngStream& rng) {
  const double u = rng.uniform();
  const double v = rng.uniform();
  const int cls = rng.uniform_int(3);
  Ket data(4);
  int label;
  if (cls == 0) {
    data.amp[0] = std::sqrt(1.0 - u * u);  // |00>
    data.amp[2] = u;                       // |10>
    label = -1;
  } else {
    const double sign = cls == 1 ? 1.0 : -1.0;
    data.amp[1] = sign * std::sqrt(1.0 - v * v);  // |01>
    data.amp[2] = v;                              // |10>
    label = +1;
  }
  return LabeledSample::pure(tensor(data, ancilla_00()), label);
}

Exp2Variant exp2_variant_from_name(const std::string& name) {
  if (name == "as-written") return Exp2Variant::as_written;
  if (name == "bell") return Exp2Variant::bell;
  throw std::invalid_argument("unknown exp2 variant '" + name + "'");
}

std::string exp2_variant_name(Exp2Variant v) {
  return v == Exp2Variant::as_written ? "as-written" : "bell";
}

LabeledSample sample_exp2(RngStream& rng, Exp2Variant variant) {
  const int label = rng.uniform_int(2) == 0 ? -1 : +1;
  if (label == -1) {
    const CMatrix rho_a = ginibre_density(2, rng);
    const CMatrix rho_b = ginibre_density(2, rng);
    return LabeledSample::mixed(tensor(tensor(rho_a, rho_b), density(ancilla_00())), label);
  }
  Ket psi(4);
  if (variant == Exp2Variant::as_written) {
    // The equal superposition, normalized; equals |+>|+> (a product state).
    for (int i = 0; i < 4; ++i) psi.amp[i] = 0.5;
  } else {
    psi.amp[0] = psi.amp[3] = 1.0 / std::sqrt(2.0);
  }
  return LabeledSample::pure(tensor(psi, ancilla_00()), label);
}

LabeledSample sample_exp3(RngStream& rng) {
  const int label = rng.uniform_int(2) == 0 ? -1 : +1;
  if (label == +1) {
    Ket ghz(16);
    ghz.amp[0] = ghz.amp[15] = 1.0 / std::sqrt(2.0);
    return LabeledSample::pure(std::move(ghz), label);
  }
  CMatrix rho = ginibre_density(2, rng);
  for (int j = 1; j < 4; ++j) rho = tensor(rho, ginibre_density(2, rng));
  return LabeledSample::mixed(std::move(rho), label);
}

std::vector<LabeledSample> gen_exp1(int n, RngStream& rng) {
  std::vector<LabeledSample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(sample_exp1(rng));
  return out;
}

std::vector<LabeledSample> gen_exp2(int n, RngStream& rng, Exp2Variant variant) {
  std::vector<LabeledSample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(sample_exp2(rng, variant));
  return out;
}

std::vector<LabeledSample> gen_exp3(int n, RngStream& rng) {
  std::vector<LabeledSample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(sample_exp3(rng));
  return out;
}

ExperimentSpec experiment_spec(const std::string& id) {
  ExperimentSpec spec;
  spec.id = id;
  if (id == "exp1" || id == "exp2" || id == "exp2-bell") {
    spec.num_qubits = 4;
    spec.ansatz.num_qubits = 4;
    spec.ansatz.form = AnsatzSpec::Form::layered_product;
    // Three perceptrons U_11 (0,1), U_12 (1,2), U_21 (2,3); p = 48.
    for (int q : {0, 1, 2}) spec.ansatz.layers.push_back({perceptron_generators(4, q), CMatrix()});

    // Readout on qubits (2,3): Pi_{-1} = |00><00| + |11><11| there.
    CMatrix pi_minus(4);
    pi_minus(0, 0) = 1.0;
    pi_minus(3, 3) = 1.0;
    const std::vector<int> readout{2, 3};
    CMatrix m_minus = embed_on_qubits(pi_minus, 4, readout);
    CMatrix m_plus = CMatrix::identity(16) - m_minus;
    spec.povm.outcomes = {-1, +1};
    spec.povm.ops = {std::move(m_minus), std::move(m_plus)};
  } else if (id == "exp3") {
    spec.num_qubits = 4;
    spec.ansatz.num_qubits = 4;
    spec.ansatz.form = AnsatzSpec::Form::layered_product;
    Layer layer;
    layer.generators.reserve(256);
    for (int code = 0; code < 256; ++code) layer.generators.push_back(pauli_from_code(code, 4));
    spec.ansatz.layers.push_back(std::move(layer));

    CMatrix m_minus(16);
    m_minus(0, 0) = 1.0;
    m_minus(15, 15) = 1.0;
    CMatrix m_plus = CMatrix::identity(16) - m_minus;
    spec.povm.outcomes = {-1, +1};
    spec.povm.ops = {std::move(m_minus), std::move(m_plus)};
  } else {
    throw std::invalid_argument("unknown experiment id '" + id + "'");
  }
  spec.ansatz.validate();
  spec.povm.validate();
  spec.locality = static_cast<int>(povm_support(spec.povm, spec.num_qubits).size());
  return spec;
}

std::function<LabeledSample()> make_stream(const std::string& id, RngStream rng) {
  if (id == "exp1") {
    return [rng]() mutable { return sample_exp1(rng); };
  }
  if (id == "exp2") {
    return [rng]() mutable { return sample_exp2(rng, Exp2Variant::as_written); };
  }
  if (id == "exp2-bell") {
    return [rng]() mutable { return sample_exp2(rng, Exp2Variant::bell); };
  }
  if (id == "exp3") {
    return [rng]() mutable { return sample_exp3(rng); };
  }
  throw std::invalid_argument("unknown experiment id '" + id + "'");
}

std::vector<LabeledSample> make_batch(const std::string& id, int n, RngStream rng) {
  auto stream = make_stream(id, rng);
  std::vector<LabeledSample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(stream());
  return out;
}

namespace {

void put_u16(std::string& buf, uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xFF));
  buf.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& buf, uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& buf, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

uint64_t get_bits(const std::string& buf, size_t& pos, int nbytes) {
  uint64_t v = 0;
  for (int i = 0; i < nbytes; ++i) v |= static_cast<uint64_t>(static_cast<uint8_t>(buf[pos++])) << (8 * i);
  return v;
}

constexpr char kMagic[8] = {'Q', 'S', 'G', 'D', 'D', 'A', 'T', 'A'};
constexpr uint16_t kVersion = 1;

}  // namespace

void dump_samples(const std::string& path, std::span<const LabeledSample> samples) {
  if (samples.empty()) throw std::invalid_argument("dump_samples: empty sample set");
  const int d = num_qubits_of_dim(samples[0].dim());
  std::string buf;
  buf.append(kMagic, 8);
  put_u16(buf, kVersion);
  put_u16(buf, static_cast<uint16_t>(d));
  put_u32(buf, static_cast<uint32_t>(samples.size()));
  for (const auto& s : samples) {
    const CMatrix rho = s.density();
    if (rho.dim() != (1 << d)) throw std::invalid_argument("dump_samples: mixed dimensions");
    for (int i = 0; i < rho.dim(); ++i)
      for (int j = 0; j < rho.dim(); ++j) {
        put_f64(buf, rho(i, j).real());
        put_f64(buf, rho(i, j).imag());
      }
    buf.push_back(static_cast<char>(static_cast<int8_t>(s.label)));
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("dump_samples: cannot open '" + path + "'");
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) throw std::runtime_error("dump_samples: write failed for '" + path + "'");
}

std::vector<LabeledSample> load_samples(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_samples: cannot open '" + path + "'");
  std::string buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (buf.size() < 16 || std::memcmp(buf.data(), kMagic, 8) != 0)
    throw std::runtime_error("load_samples: bad header");
  size_t pos = 8;
  const uint16_t version = static_cast<uint16_t>(get_bits(buf, pos, 2));
  if (version != kVersion) throw std::runtime_error("load_samples: unsupported version");
  const int d = static_cast<int>(get_bits(buf, pos, 2));
  const uint32_t count = static_cast<uint32_t>(get_bits(buf, pos, 4));
  const int dim = 1 << d;
  const size_t need = 16 + static_cast<size_t>(count) * (static_cast<size_t>(dim) * dim * 16 + 1);
  if (buf.size() != need) throw std::runtime_error("load_samples: truncated file");

  std::vector<LabeledSample> out;
  out.reserve(count);
  for (uint32_t s = 0; s < count; ++s) {
    CMatrix rho(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        uint64_t re_bits = get_bits(buf, pos, 8);
        uint64_t im_bits = get_bits(buf, pos, 8);
        double re, im;
        std::memcpy(&re, &re_bits, 8);
        std::memcpy(&im, &im_bits, 8);
        rho(i, j) = cdouble(re, im);
      }
    const int label = static_cast<int8_t>(buf[pos++]);
    out.push_back(LabeledSample::mixed(std::move(rho), label));
  }
  return out;
}

}  // namespace qsgd::datasets
