// Command-line surface: bound/parameter calculators, file extraction,
// exhaustive family audits and the verification suites.
//
// Exit codes: 0 success, 1 property violation, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "privamp/bounds.hpp"
#include "privamp/hash_family.hpp"
#include "privamp/verify.hpp"

namespace {

using nlohmann::json;
using namespace privamp;

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
}

int cmd_params(const std::optional<double>& hmin, const std::optional<std::uint64_t>& n,
               const std::optional<std::uint64_t>& l, const std::optional<double>& delta,
               const std::optional<double>& eps, const std::optional<std::string>& family) {
    if (!hmin) throw std::invalid_argument("params needs --hmin");
    if (l && delta)
        throw std::invalid_argument("give exactly one of --l and --delta");
    json out;
    if (delta) {
        out["l"] = bounds::extractable_bits(*hmin, *delta);
    } else if (l) {
        if (family) {
            auto desc = hashing::HashFamilyDescriptor::parse(*family);
            if (desc.l != *l)
                throw std::invalid_argument("--l disagrees with the family");
            auto res = bounds::general_delta(
                desc.l, desc.theoretical_delta().to_double(), *hmin);
            out["delta"] = res.delta;
            out["eps_star"] = res.eps_star;
        } else if (eps && n) {
            auto p = bounds::short_seed_params(*n, *l, *eps);
            out["k"] = p.k;
            out["s"] = p.s;
            out["delta1"] = p.delta1;
            out["delta2"] = p.delta2;
            out["delta"] = bounds::theorem8_delta(static_cast<double>(*l), *hmin, *eps);
        } else {
            out["delta"] = bounds::classical_delta(static_cast<double>(*l), *hmin);
        }
    } else {
        throw std::invalid_argument("give exactly one of --l and --delta");
    }
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_extract(const std::string& in_path, const std::string& family_text,
                const std::string& seed_hex, const std::string& out_path) {
    auto desc = hashing::HashFamilyDescriptor::parse(family_text);
    // hex carries whole nibbles; when the seed length is not a multiple of
    // four the top pad bits must be zero
    std::uint64_t want_digits = (desc.seed_bits() + 3) / 4;
    if (seed_hex.size() != want_digits)
        throw std::invalid_argument("seed hex length does not match the family");
    hashing::BitString padded = hashing::BitString::from_hex(seed_hex);
    for (std::size_t i = desc.seed_bits(); i < padded.size(); ++i)
        if (padded.bit(i))
            throw std::invalid_argument("seed hex has nonzero pad bits");
    hashing::BitString seed = padded.slice(0, desc.seed_bits());

    std::vector<std::uint8_t> data = read_file(in_path);
    if (8 * data.size() < desc.n)
        throw std::invalid_argument("input shorter than n bits");
    hashing::BitString x = hashing::BitString::from_bytes(data, desc.n);

    hashing::BitString z = hashing::evaluate(desc, x, seed);
    write_file(out_path, z.to_bytes());
    std::ofstream meta(out_path + ".meta", std::ios::trunc);
    meta << "bits=" << desc.l << "\n";
    return 0;
}

int cmd_family_audit(const std::string& family_text, std::uint64_t budget) {
    auto desc = hashing::HashFamilyDescriptor::parse(family_text);
    auto audit = hashing::audit_collision_prob(desc, budget);
    auto delta = desc.theoretical_delta();
    bool pass = audit.delta_hat <= delta;
    json out{{"family", desc.to_text()},
             {"delta_hat", audit.delta_hat.to_string()},
             {"delta", delta.to_string()},
             {"delta_hat_value", audit.delta_hat.to_double()},
             {"delta_value", delta.to_double()},
             {"pass", pass}};
    std::cout << out.dump() << "\n";
    return pass ? 0 : 1;
}

int cmd_verify(const std::string& suite, std::size_t trials, std::uint64_t seed,
               const std::optional<std::string>& report_path) {
    verify::VerifyReport rep = verify::run_suite(suite, trials, seed);
    std::string text = rep.to_json().dump(2);
    if (report_path) {
        std::ofstream out(*report_path, std::ios::trunc);
        if (!out) throw std::invalid_argument("cannot open report file");
        out << text << "\n";
    } else {
        std::cout << text << "\n";
    }
    return rep.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"universal-hashing randomness extraction toolkit"};
    app.require_subcommand(1);

    std::optional<double> hmin, delta, eps;
    std::optional<std::uint64_t> n, l;
    std::optional<std::string> family;

    auto* params = app.add_subcommand("params", "bound and parameter calculators");
    params->add_option("--hmin", hmin, "min-entropy of the source, bits");
    params->add_option("--n", n, "input length, bits");
    params->add_option("--l", l, "output length, bits");
    params->add_option("--delta", delta, "target distance from uniform");
    params->add_option("--eps", eps, "smoothing parameter");
    params->add_option("--family", family, "family descriptor kind:n:l[:k]");

    std::string in_path, out_path, family_text, seed_hex;
    auto* extract = app.add_subcommand("extract", "apply a seeded hash to a file");
    extract->add_option("--in", in_path, "input file")->required();
    extract->add_option("--family", family_text, "family descriptor")->required();
    extract->add_option("--seed-hex", seed_hex, "seed as hex")->required();
    extract->add_option("--out", out_path, "output file")->required();

    std::string audit_family;
    std::uint64_t budget = hashing::kDefaultAuditBudget;
    auto* audit = app.add_subcommand("family-audit",
                                     "exhaustive collision-probability audit");
    audit->add_option("--family", audit_family, "family descriptor")->required();
    audit->add_option("--budget", budget, "enumeration budget");

    std::string suite;
    std::size_t trials = 100;
    std::uint64_t rng_seed = 1;
    std::optional<std::string> report_path;
    auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    verify_cmd->add_option("--suite", suite, "suite name")->required();
    verify_cmd->add_option("--trials", trials, "number of trials");
    verify_cmd->add_option("--rng-seed", rng_seed, "generator seed");
    verify_cmd->add_option("--report", report_path, "report JSON path");

    try {
        app.parse(argc, argv);
        if (params->parsed()) return cmd_params(hmin, n, l, delta, eps, family);
        if (extract->parsed())
            return cmd_extract(in_path, family_text, seed_hex, out_path);
        if (audit->parsed()) return cmd_family_audit(audit_family, budget);
        if (verify_cmd->parsed())
            return cmd_verify(suite, trials, rng_seed, report_path);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
