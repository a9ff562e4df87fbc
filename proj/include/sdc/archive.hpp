#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "code.hpp"
#include "distance.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "provenance.hpp"
#include "search.hpp"

namespace sdc {

// Layout:
//   DIR/index.txt                      "q 2n k d classification path" per record
//   DIR/q{q}_n{2n}_k{k}_d{d}[_i]/generator.txt
//                                 /enumerator.txt | mds_certificate.txt
//                                 /provenance.txt

namespace detail {

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw io_error("cannot open " + p.string() + " for writing");
    out << text;
    out.close();
    if (!out) throw io_error("failed writing " + p.string());
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw io_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string mds_certificate_text(const CodeRecord& r) {
    return "mds " + std::to_string(r.q) + ' ' + std::to_string(r.length) + ' ' + std::to_string(r.dimension) + ' ' +
           std::to_string(r.distance) + '\n';
}

}  // namespace detail

inline std::string record_directory_name(const CodeRecord& r) {
    return "q" + std::to_string(r.q) + "_n" + std::to_string(r.length) + "_k" + std::to_string(r.dimension) + "_d" +
           std::to_string(r.distance);
}

/// Writes one record and appends it to the index. Returns the record directory, relative to `dir`.
inline std::string archive_write(const CodeRecord& r, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create " + dir.string() + ": " + ec.message());
    const std::string base = record_directory_name(r);
    std::string name = base;
    for (unsigned i = 2; fs::exists(dir / name); ++i) name = base + "_" + std::to_string(i);
    const fs::path sub = dir / name;
    if (!fs::create_directory(sub, ec) || ec) throw io_error("cannot create " + sub.string());

    detail::write_file(sub / "generator.txt", to_text(r.generator));
    if (r.enumerator) detail::write_file(sub / "enumerator.txt", to_text(*r.enumerator, r.q, r.dimension));
    if (r.mds_certificate) detail::write_file(sub / "mds_certificate.txt", detail::mds_certificate_text(r));
    Provenance p = r.provenance;
    if (!r.timestamp.empty()) p.set("timestamp", r.timestamp);
    detail::write_file(sub / "provenance.txt", p.to_text());

    std::ofstream index(dir / "index.txt", std::ios::app | std::ios::binary);
    if (!index) throw io_error("cannot open " + (dir / "index.txt").string());
    index << r.q << ' ' << r.length << ' ' << r.dimension << ' ' << r.distance << ' ' << to_string(r.classification) << ' '
          << name << '\n';
    if (!index) throw io_error("failed writing the archive index");
    return name;
}

struct IndexEntry {
    unsigned q;
    std::size_t length, dimension, distance;
    Classification classification;
    std::string path;
};

inline std::vector<IndexEntry> read_index(const std::filesystem::path& dir) {
    std::istringstream in(detail::read_file(dir / "index.txt"));
    std::vector<IndexEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        IndexEntry e{};
        std::string cls;
        if (!(ls >> e.q >> e.length >> e.dimension >> e.distance >> cls >> e.path))
            throw invalid_argument("malformed index line: " + line);
        e.classification = classification_from_string(cls);
        out.push_back(std::move(e));
    }
    return out;
}

/// Loads the record at DIR/path; the index entry supplies the claimed parameters.
inline CodeRecord archive_read(const std::filesystem::path& dir, const IndexEntry& e) {
    const auto sub = dir / e.path;
    CodeRecord r;
    r.generator = matrix_from_text(detail::read_file(sub / "generator.txt"));
    r.q = e.q;
    r.length = e.length;
    r.dimension = e.dimension;
    r.distance = e.distance;
    r.classification = e.classification;
    if (std::filesystem::exists(sub / "enumerator.txt")) {
        std::istringstream in(detail::read_file(sub / "enumerator.txt"));
        r.enumerator = enumerator_from_text(in).enumerator;
    }
    r.mds_certificate = std::filesystem::exists(sub / "mds_certificate.txt");
    std::istringstream pin(detail::read_file(sub / "provenance.txt"));
    r.provenance = Provenance::from_text(pin);
    if (auto ts = r.provenance.get("timestamp")) r.timestamp = *ts;
    return r;
}

struct VerifyIssue {
    std::string path;
    std::string message;
};

struct VerifyReport {
    std::size_t records = 0;
    std::vector<VerifyIssue> issues;
    bool clean() const noexcept { return issues.empty(); }
};

/// Problems with one record, recomputed from its generator matrix alone.
inline std::vector<std::string> verify_record(const CodeRecord& r, const DistancePolicy& policy = {}) {
    std::vector<std::string> bad;
    auto fail = [&](std::string m) { bad.push_back(std::move(m)); };
    const auto& g = r.generator;
    if (g.field().q() != r.q) fail("field of the matrix (" + std::to_string(g.field().q()) + ") differs from q");
    if (g.cols() != r.length || g.rows() != r.dimension) fail("matrix shape does not match [n, k]");
    if (!bad.empty()) return bad;
    if (rank(g) != g.rows()) return {"generator matrix is not of full rank"};
    const LinearCode c(g);
    if (!is_self_dual(c)) return {"code is not self-dual"};
    if (r.distance > r.dimension + 1) fail("recorded d exceeds the Singleton bound");
    else if (classify(r.length, r.distance).kind != r.classification) fail("classification inconsistent with d");

    if (r.enumerator) {
        if (detail::code_size(c) > policy.exhaustive_cap) {
            fail("enumerator beyond the enumeration cap");
            return bad;
        }
        const auto w = weight_enumerator(c, policy.exhaustive_cap, 1);
        if (w != *r.enumerator) fail("weight enumerator mismatch");
        if (w.minimum_distance() != r.distance)
            fail("recomputed d = " + std::to_string(w.minimum_distance()) + ", recorded " + std::to_string(r.distance));
        if (macwilliams_transform(w, r.q, r.dimension, r.length) != w) fail("MacWilliams fixed point fails");
    } else if (r.mds_certificate) {
        if (!is_mds_systematic(c)) fail("MDS certificate does not hold");
        if (r.distance != r.dimension + 1) fail("MDS certificate with d != k + 1");
    } else {
        const auto res = min_distance_bz(c, {policy.bz_budget, 0});
        if (r.provenance.get("distance_status") == "lower-bound") {
            const std::size_t lower = res.is_exact() ? res.distance : res.lower;
            if (lower < r.distance)
                fail("recomputed lower bound " + std::to_string(lower) + " is below the recorded " + std::to_string(r.distance));
        } else if (!res.is_exact()) fail("d could not be recomputed within the work budget");
        else if (res.distance != r.distance)
            fail("recomputed d = " + std::to_string(res.distance) + ", recorded " + std::to_string(r.distance));
    }
    return bad;
}

/// Re-reads every indexed record, rebuilds the code and recomputes d. Unreadable records are
/// reported as issues; a missing index is an I/O error.
inline VerifyReport archive_verify(const std::filesystem::path& dir, const DistancePolicy& policy = {}) {
    VerifyReport rep;
    for (const auto& e : read_index(dir)) {
        ++rep.records;
        try {
            for (auto& m : verify_record(archive_read(dir, e), policy)) rep.issues.push_back({e.path, std::move(m)});
        } catch (const std::exception& ex) {
            rep.issues.push_back({e.path, std::string("unreadable: ") + ex.what()});
        }
    }
    return rep;
}

}  // namespace sdc
