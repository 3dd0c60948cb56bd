#pragma once

// JSON ingestion and export of configurations and biped descriptions.
//
// Every dimensional key carries its unit as a suffix (rho_mm, alpha_deg,
// mass_g, ...). Output always uses SI suffixes so that a serialized
// configuration reads back bit-for-bit. Input errors are reported as
// Error{InvalidConfiguration} with a "source:line: message" text.

#include <iosfwd>
#include <string>

#include "twocontact/biped.hpp"
#include "twocontact/model.hpp"

namespace twocontact {

// `source` names the text in error messages (usually the file path).
Configuration parse_configuration(const std::string& text,
                                  const std::string& source = "<input>");
Configuration load_configuration(const std::string& path);

// Pretty-printed JSON with the keys mass_kg, rho_m, h_m, l1_m, l2_m,
// phi1_rad, phi2_rad, mu1, mu2, f_ex_N, alpha_rad, tau_ex_Nm.
std::string configuration_to_json(const Configuration& cfg);

struct BipedFile {
  BipedSpec spec;
  BipedGrid grid;
};

BipedFile parse_biped(const std::string& text, const std::string& source = "<input>");
BipedFile load_biped(const std::string& path);
std::string biped_to_json(const BipedFile& file);

// Reads a whole file; throws Error{Io}.
std::string read_text_file(const std::string& path);

}  // namespace twocontact
