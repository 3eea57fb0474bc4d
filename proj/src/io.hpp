#pragma once

#include <string>

#include "dmregion.hpp"
#include "epi.hpp"
#include "extremal.hpp"
#include "secrecy.hpp"

// JSON schemas for every file the tools read or write. All parse failures
// (malformed JSON, missing fields, wrong shapes) surface as ParseError;
// semantic validation is delegated to the module constructors.
namespace epc::io {

// {"n": 2, "rows": [[...], ...]}; input is symmetrized, asymmetry beyond
// 1e-8 relative is rejected.
SymMatrix matrix_from_json(const std::string& text);
std::string matrix_to_json(const SymMatrix& m);

// {"weights": [...], "means": [[...], ...], "covs": [matrix, ...]}
GaussianMixture mixture_from_json(const std::string& text);

// {"a": matrix, "nz": matrix, "x": {"gaussian": matrix} | {"mixture": mixture}}
EpiInstance epi_instance_from_json(const std::string& text);

// {"d": matrix, "bx": matrix, "nz": matrix}
LinearGaussChannel gauss_channel_from_json(const std::string& text);

// {"s": matrix, "n0": matrix, "nk": [matrix, ...], "mu": [...]}
ExtremalInstance extremal_from_json(const std::string& text);

struct CertificateFile {
  KktCertificate cert;  // residuals unset until kkt_residual() is run
  Vec mu;               // normalized multipliers recorded alongside
};
// {"bstar": matrix, "m1": matrix, "m2": matrix, "mu": [...],
//  "residuals": {"stat":.., "slack1":.., "slack2":..}} (residuals optional on read)
CertificateFile certificate_from_json(const std::string& text);
std::string certificate_to_json(const KktCertificate& cert, const Vec& mu);

// {"s": matrix, "n1": matrix, "n2": matrix, "n3": matrix}
ChannelSpec secrecy_spec_from_json(const std::string& text);

// {"w1": [[...]], "d12": [[...]], "d23": [[...]]}
DiscreteChannelSpec dm_spec_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace epc::io
