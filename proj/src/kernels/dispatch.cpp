#include <atomic>
#include <cstdlib>

#include "asrf/errors.hpp"
#include "asrf/kernels/kernels.hpp"

namespace asrf::kernels {

#if defined(ASRF_HAVE_AVX2_BUILD)
const Ops& avx2();  // avx2.cpp

namespace {
bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
}
#endif

namespace {

std::atomic<const Ops*> g_active{nullptr};

const Ops* resolve(const std::string& name) {
    if (name == "scalar") return &scalar();
#if defined(ASRF_HAVE_AVX2_BUILD)
    if (name == "avx2") {
        if (!avx2_supported())
            throw ParameterError("kernel 'avx2' is not supported on this CPU");
        return &avx2();
    }
#endif
    if (name == "auto") {
#if defined(ASRF_HAVE_AVX2_BUILD)
        if (avx2_supported()) return &avx2();
#endif
        return &scalar();
    }
    throw ParameterError("unknown kernel '" + name + "'");
}

const Ops* initial() {
    if (const char* env = std::getenv("ASRF_KERNEL")) return resolve(env);
    return resolve("auto");
}

}  // namespace

const Ops& active() {
    const Ops* ops = g_active.load(std::memory_order_acquire);
    if (!ops) {
        ops = initial();
        g_active.store(ops, std::memory_order_release);
    }
    return *ops;
}

void select(const std::string& name) {
    g_active.store(resolve(name), std::memory_order_release);
}

std::vector<std::string> available() {
    std::vector<std::string> names = {"scalar"};
#if defined(ASRF_HAVE_AVX2_BUILD)
    if (avx2_supported()) names.emplace_back("avx2");
#endif
    return names;
}

}  // namespace asrf::kernels
