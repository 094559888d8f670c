#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qdilate/anti.hpp"
#include "qdilate/tupledilate.hpp"

namespace qdilate::io {

using json = nlohmann::json;

// Thrown for malformed documents; the CLI maps it to exit code 1.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json to_json(cplx z);
cplx complex_from(const json& j);

// Dense: rows of [re, im] pairs.  Sparse: {"rows", "cols", "entries": [[i, j, re, im], ...]}.
json dense_json(const Mat& A);
json sparse_json(const Mat& A);
Mat mat_from(const json& j);

json to_json(const QFamily& q);
QFamily qfamily_from(const json& j);

struct TupleDocument {
    Tuple matrices;
    std::optional<QFamily> q;
    std::string name;
    std::optional<std::uint64_t> seed;
};
json to_json(const TupleDocument& d);
TupleDocument tuple_from(const json& j);

json to_json(const VerificationReport& r);
VerificationReport report_from(const json& j);
json to_json(const ClassificationReport& r);
json to_json(const AntiReduction& r);

struct CertificateDocument {
    TupleDocument input;
    DilationCertificate cert;
    Tol tol;
    std::string toolVersion;
    std::string inputHash;
};
json to_json(const CertificateDocument& d);
CertificateDocument certificate_from(const json& j);

// Sorted keys, two-space indent, shortest round-trip floats.
std::string canonical(const json& j);
std::string sha256_hex(const std::string& s);

json read_file(const std::string& path);  // "-" reads stdin
void write_text(const std::string& path, const std::string& text);  // empty or "-" writes stdout

}  // namespace qdilate::io
