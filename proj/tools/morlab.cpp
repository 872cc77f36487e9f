// Command-line front end: key generation, encryption, attacks, benchmarks.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "morlab/morlab.hpp"

namespace {

using namespace morlab;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open file for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw FormatError("read failed: " + path);
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open file for writing: " + path);
    out << text;
    out.flush();
    if (!out) throw FormatError("write failed: " + path);
}

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
    const std::string text = read_text_file(path);
    return std::vector<std::uint8_t>(text.begin(), text.end());
}

void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    write_text_file(path, std::string(bytes.begin(), bytes.end()));
}

// Seeds from the OS when the user did not pin one.
std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Ascending coefficients, constant term first.
std::string poly_to_string(const Poly& f) {
    std::ostringstream out;
    for (int i = 0; i <= f.degree(); ++i) {
        if (i) out << ' ';
        out << f.coeff(i).value();
    }
    return out.str();
}

const MatrixFp& head_matrix(const MorPublicKey& pub) {
    if (std::holds_alternative<EsAut>(pub.phi)) return std::get<EsAut>(pub.phi).m();
    return std::get<MatrixFp>(pub.phi);
}

void print_congruence(const DlogAnswer& ans) {
    std::cout << "m ≡ " << ans.residue << " (mod " << ans.modulus << ")\n";
}

struct KeygenArgs {
    std::string platform;
    std::uint64_t p = 0;
    std::uint64_t n = 0;
    std::uint64_t d = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string pub_path;
    std::string priv_path;
};

void run_keygen(const KeygenArgs& a) {
    const PlatformParams params = [&]() -> PlatformParams {
        if (a.platform == "extraspecial") {
            if (a.n == 0) throw ValueError("keygen: --n is required for the extraspecial platform");
            if (a.d != 0) throw ValueError("keygen: --d does not apply to the extraspecial platform");
            return EsParams(PrimeModulus(a.p), static_cast<unsigned>(a.n));
        }
        if (a.d == 0) throw ValueError("keygen: --d is required for the elementary platform");
        if (a.n != 0) throw ValueError("keygen: --n does not apply to the elementary platform");
        return EaParams(PrimeModulus(a.p), static_cast<unsigned>(a.d));
    }();
    Rng rng(a.seed_set ? a.seed : entropy_seed());
    const auto [pub, priv] = mor_keygen(params, rng);
    write_text_file(a.pub_path, write_artifact(pub));
    write_text_file(a.priv_path, write_artifact(priv));
    std::cout << "wrote public key to " << a.pub_path << "\n";
    std::cout << "wrote private key to " << a.priv_path << "\n";
}

struct EncryptArgs {
    std::string pub_path;
    std::string in_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void run_encrypt(const EncryptArgs& a) {
    const MorPublicKey pub = parse_public(read_text_file(a.pub_path));
    const std::vector<std::uint8_t> message = read_binary_file(a.in_path);
    const PlatformElement element = encode_message(pub.platform, message);
    Rng rng(a.seed_set ? a.seed : entropy_seed());
    const MorCiphertext ct = mor_encrypt(pub, element, rng);
    write_text_file(a.out_path, write_artifact(ct));
    std::cout << "wrote ciphertext to " << a.out_path << "\n";
}

struct DecryptArgs {
    std::string priv_path;
    std::string in_path;
    std::string out_path;
};

void run_decrypt(const DecryptArgs& a) {
    const MorPrivateKey priv = parse_private(read_text_file(a.priv_path));
    const MorCiphertext ct = parse_ciphertext(read_text_file(a.in_path));
    const PlatformElement element = mor_decrypt(priv, ct);
    write_binary_file(a.out_path, decode_message(priv.platform, element));
    std::cout << "wrote plaintext to " << a.out_path << "\n";
}

struct AttackArgs {
    std::string kind;
    std::string pub_path;
    std::string target_path;
};

// The attacked pair is (phi, phi_m) from the public key; when --target names a
// ciphertext its head phi_r replaces phi_m, so the recovered exponent is r.
void run_attack(const AttackArgs& a) {
    MorPublicKey pub = parse_public(read_text_file(a.pub_path));
    if (!a.target_path.empty()) {
        const MorCiphertext ct = parse_ciphertext(read_text_file(a.target_path));
        if (!(ct.platform == pub.platform))
            throw ValueError("attack: target ciphertext platform differs from the public key");
        pub.phi_m = ct.phi_r;
    }
    if (a.kind == "central") {
        print_congruence(central_aut_attack(pub));
        return;
    }
    if (!std::holds_alternative<MatrixFp>(pub.phi))
        throw ValueError("attack: " + a.kind + " needs the elementary platform (a matrix key)");
    const MatrixFp& g = std::get<MatrixFp>(pub.phi);
    const MatrixFp& h = std::get<MatrixFp>(pub.phi_m);
    if (a.kind == "menezes-wu") {
        print_congruence(menezes_wu_dlog(g, h));
    } else {
        print_congruence(unipotent_dlog(g, h));
    }
}

struct DlogArgs {
    std::uint64_t p = 0;
    std::uint64_t g = 0;
    std::uint64_t h = 0;
};

void run_dlog(const DlogArgs& a) {
    const PrimeModulus mod(a.p);
    const FpElem g(a.g, mod), h(a.h, mod);
    if (g.value() == 0 || h.value() == 0)
        throw ValueError("dlog: g and h must be nonzero mod p");
    DlogInstance<FpElem> inst{g, h, factor_integer(a.p - 1)};
    print_congruence(pohlig_hellman(inst));
}

void run_inspect(const std::string& pub_path) {
    const MorPublicKey pub = parse_public(read_text_file(pub_path));
    if (std::holds_alternative<EsParams>(pub.platform)) {
        const auto& pp = std::get<EsParams>(pub.platform);
        std::cout << "platform: extraspecial p=" << pp.p.value() << " n=" << pp.n << "\n";
    } else {
        const auto& pp = std::get<EaParams>(pub.platform);
        std::cout << "platform: elementary p=" << pp.p.value() << " d=" << pp.d << "\n";
    }
    const Poly chi = char_poly(head_matrix(pub));
    std::cout << "chi: " << poly_to_string(chi) << "\n";
    std::cout << "irreducible: " << (is_irreducible(chi) ? "yes" : "no") << "\n";
    std::cout << "order: " << platform_order(pub.phi) << "\n";
}

struct BenchArgs {
    std::string suite;
    std::vector<std::size_t> sizes;
};

void run_bench(const BenchArgs& a) {
    BenchReport report;
    if (a.suite == "expo") {
        report = a.sizes.empty() ? bench_expo() : bench_expo(a.sizes);
    } else {
        if (!a.sizes.empty())
            throw ValueError("bench: --sizes applies only to the expo suite");
        report = bench_protocol();
    }
    std::cout << format_table(report);
    std::cout << format_machine(report);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"research toolkit for the MOR cryptosystem"};
    app.require_subcommand(1);

    KeygenArgs kg;
    auto* keygen = app.add_subcommand("keygen", "generate a MOR key pair");
    keygen->add_option("--platform", kg.platform, "group family")
        ->required()
        ->check(CLI::IsMember({"extraspecial", "elementary"}));
    keygen->add_option("--p", kg.p, "prime modulus")->required();
    keygen->add_option("--n", kg.n, "extraspecial rank (group order p^(2n+1))");
    keygen->add_option("--d", kg.d, "elementary-abelian rank (group order p^d)");
    keygen->add_option("--seed", kg.seed, "deterministic RNG seed");
    keygen->add_option("--pub", kg.pub_path, "output path for the public key")->required();
    keygen->add_option("--priv", kg.priv_path, "output path for the private key")->required();

    EncryptArgs en;
    auto* encrypt = app.add_subcommand("encrypt", "encrypt a message file");
    encrypt->add_option("--pub", en.pub_path, "public key file")->required();
    encrypt->add_option("--in", en.in_path, "plaintext input file")->required();
    encrypt->add_option("--out", en.out_path, "ciphertext output file")->required();
    encrypt->add_option("--seed", en.seed, "deterministic RNG seed");

    DecryptArgs de;
    auto* decrypt = app.add_subcommand("decrypt", "decrypt a ciphertext file");
    decrypt->add_option("--priv", de.priv_path, "private key file")->required();
    decrypt->add_option("--in", de.in_path, "ciphertext input file")->required();
    decrypt->add_option("--out", de.out_path, "plaintext output file")->required();

    AttackArgs at;
    auto* attack = app.add_subcommand("attack", "recover the secret exponent of a key");
    attack->add_option("--kind", at.kind, "attack family")
        ->required()
        ->check(CLI::IsMember({"central", "menezes-wu", "unipotent"}));
    attack->add_option("--pub", at.pub_path, "public key file")->required();
    attack->add_option("--target", at.target_path, "ciphertext whose head replaces phi^m");

    DlogArgs dl;
    auto* dlog = app.add_subcommand("dlog", "discrete log in the multiplicative group mod p");
    dlog->set_help_flag("--help", "print this help message and exit");
    dlog->add_option("--p", dl.p, "prime modulus")->required();
    dlog->add_option("--g", dl.g, "base")->required();
    dlog->add_option("--h", dl.h, "target")->required();

    std::string inspect_pub;
    auto* inspect = app.add_subcommand("inspect", "describe a public key");
    inspect->add_option("--pub", inspect_pub, "public key file")->required();

    BenchArgs be;
    auto* bench = app.add_subcommand("bench", "run a benchmark suite");
    bench->add_option("--suite", be.suite, "which suite to run")
        ->required()
        ->check(CLI::IsMember({"expo", "protocol"}));
    bench->add_option("--sizes", be.sizes, "matrix dimensions for the expo suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        kg.seed_set = keygen->count("--seed") > 0;
        en.seed_set = encrypt->count("--seed") > 0;
        if (keygen->parsed()) run_keygen(kg);
        else if (encrypt->parsed()) run_encrypt(en);
        else if (decrypt->parsed()) run_decrypt(de);
        else if (attack->parsed()) run_attack(at);
        else if (dlog->parsed()) run_dlog(dl);
        else if (inspect->parsed()) run_inspect(inspect_pub);
        else if (bench->parsed()) run_bench(be);
    } catch (const NoSolutionError& e) {
        std::cerr << "no solution: " << e.what() << "\n";
        return 3;
    } catch (const CapExceededError& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
