// Machine-checkable plurigenus certificates.
//
// A certificate carries the manifold and structure data, the forcing
// polynomials and case trees in both forms, the resonance records and the
// verdict. verify_certificate re-derives the polynomials from the data and
// checks the trees without trusting the solver that produced them.
#pragma once

#include <string>
#include <vector>

#include "kod/plurigenera.hpp"

namespace kod {

/// JSON text of the report as a certificate.
std::string certificate_json(const PlurigenusReport& report, const AcsData& acs);

/// Stable JSON rendering of a report (verdict, trace, sections).
std::string report_json(const PlurigenusReport& report);

struct CertificateCheck {
  bool ok = false;
  std::vector<std::string> steps;  // what was checked, in order
  std::string failure;
};

/// Checks, for each case tree in the certificate:
///  - its polynomials equal the ones recomputed from the data;
///  - every branch partitions its region on a box of integer points;
///  - every forced leaf's witness is a component of a forcing polynomial on
///    that leaf and is nonzero there by its stated rule, and the polynomials
///    are nonzero in x at 3 random integer points of the leaf;
///  - escaped leaves make all polynomials vanish.
/// Then recomputes the verdict and compares it with the recorded one.
/// Malformed input raises ParseError/ValidationError; a wrong certificate
/// returns ok = false.
CertificateCheck verify_certificate(const std::string& text);

}  // namespace kod
