#include <atomic>
#include <cstdlib>
#include <string>

#include "intbox/error.hpp"
#include "intbox/simd/kernels.hpp"

namespace intbox::simd {

namespace {

using DotFn = double (*)(std::span<const double>, std::span<const double>);

struct Table {
    Isa isa;
    DotFn dot;
    DotFn abs_dot;
};

constexpr Table kScalar{Isa::Scalar, &scalar::dot, &scalar::abs_dot};
#if defined(__x86_64__) || defined(__i386__)
constexpr Table kAvx2{Isa::Avx2, &avx2::dot, &avx2::abs_dot};
#endif
#if defined(__aarch64__)
constexpr Table kNeon{Isa::Neon, &neon::dot, &neon::abs_dot};
#endif

const Table* table_for(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return &kScalar;
        case Isa::Avx2:
#if defined(__x86_64__) || defined(__i386__)
            return __builtin_cpu_supports("avx2") ? &kAvx2 : nullptr;
#else
            return nullptr;
#endif
        case Isa::Neon:
#if defined(__aarch64__)
            return &kNeon;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

const Table* pick_default() {
    if (const char* env = std::getenv("INTBOX_SIMD")) {
        const std::string want(env);
        if (want == "scalar") return &kScalar;
        if (want == "avx2" && table_for(Isa::Avx2)) return table_for(Isa::Avx2);
        if (want == "neon" && table_for(Isa::Neon)) return table_for(Isa::Neon);
    }
    if (const Table* t = table_for(Isa::Avx2)) return t;
    if (const Table* t = table_for(Isa::Neon)) return t;
    return &kScalar;
}

std::atomic<const Table*> g_table{nullptr};

const Table& active() {
    const Table* t = g_table.load(std::memory_order_acquire);
    if (t == nullptr) {
        t = pick_default();
        g_table.store(t, std::memory_order_release);
    }
    return *t;
}

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        throw DimensionError("simd: operand lengths differ (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
    require_same_size(a.size(), b.size());
    return active().dot(a, b);
}

double abs_dot(std::span<const double> k, std::span<const double> w) {
    require_same_size(k.size(), w.size());
    return active().abs_dot(k, w);
}

Isa active_isa() { return active().isa; }

bool isa_available(Isa isa) { return table_for(isa) != nullptr; }

void set_isa(Isa isa) {
    const Table* t = table_for(isa);
    if (t == nullptr) {
        throw InvalidArgument("simd: ISA " + std::string(isa_name(isa)) + " not available on this host");
    }
    g_table.store(t, std::memory_order_release);
}

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return "scalar";
        case Isa::Avx2:
            return "avx2";
        case Isa::Neon:
            return "neon";
    }
    return "unknown";
}

}  // namespace intbox::simd
