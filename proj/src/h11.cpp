#include "dmt/h11.hpp"

#include <sstream>

#include "dmt/dieudonne.hpp"
#include "dmt/endo.hpp"

namespace dmt {

Elem tau(const Ring& K, const Elem& a) {
    require(K.n == 1, "tau: level-1 field required");
    require(!K.is_zero(a), "tau: zero input");
    return K.mul(K.frobenius(a, 1), K.inv(K.frobenius(a, -1)));
}

u64 discrete_log(const Ring& K, const Elem& a) {
    require(K.n == 1 && K.is_unit(a), "discrete_log: nonzero field element required");
    Elem x = K.one();
    Elem t = K.gen();
    for (u64 e = 0; e < K.q - 1; ++e) {
        if (x == a) return e;
        x = K.mul(x, t);
    }
    throw InternalError("discrete_log: generator does not generate K^x");
}

u64 tau_image_index(const Ring& K) {
    require(K.n == 1, "tau_image_index: level-1 field required");
    require(K.h % 2 == 0, "tau_image_index: F_{p^2} must embed (even degree required)");
    // tau is a homomorphism on the cyclic group K^x = <t>, so its image is
    // generated by tau(t).
    u64 ord = K.mult_order(tau(K, K.gen()));
    check_internal((K.q - 1) % ord == 0, "tau_image_index: order does not divide q - 1");
    return (K.q - 1) / ord;
}

CyclicGenModule make_cyclic_gen_module(const Ring& K, const Elem& lambda) {
    require(K.n == 1 && K.h % 2 == 0, "CyclicGenModule: level-1 field of even degree required");
    require(!K.is_zero(lambda), "CyclicGenModule: lambda must be nonzero");
    return {&K, lambda};
}

u64 form_class(const CyclicGenModule& M, const Elem& b, const Elem& c) {
    const Ring& K = *M.K;
    require(!K.is_zero(b), "form_class: b must be nonzero (b x + c y must generate)");
    (void)c;  // the invariant does not depend on c
    // lambda w.r.t. the generator b x + c y: sigma^-1(b) sigma(b)^-1 lambda
    Elem lam = K.mul(K.mul(K.frobenius(b, -1), K.inv(K.frobenius(b, 1))), M.lambda);
    u64 p2 = M.K->p * M.K->p;
    return discrete_log(K, lam) % (p2 - 1);
}

u64 unpolarized_form_count(const Ring& K) { return tau_image_index(K); }

u64 polarized_form_count(u64 p) {
    const Ring& K2 = Ring::get(p, 2, 1);
    u64 count = 0;
    Elem x = K2.one();
    Elem t = K2.gen();
    for (u64 e = 0; e < K2.q - 1; ++e) {
        // norm to F_p: a * a^p
        Elem nrm = K2.mul(x, K2.frobenius(x, 1));
        if (nrm == K2.one()) ++count;
        x = K2.mul(x, t);
    }
    check_internal(count == p + 1, "polarized_form_count: norm-one count is not p + 1");
    auto a = pi0(minimal_module_polarized_11(p, 1));
    check_internal(a.pi0_order == count,
                   "polarized_form_count: mismatch with pi0 of the polarized H_{1,1}");
    return count;
}

std::string h11_census_csv(u64 p, u64 degree) {
    require(degree % 2 == 0, "h11 census: degree must be even (F_{p^2} must embed)");
    const Ring& K = Ring::get(p, degree, 1);
    u64 unpol = unpolarized_form_count(K);
    u64 pol = polarized_form_count(p);
    std::ostringstream os;
    os << "p,field_degree,form_label,polarized\n";
    for (u64 lbl = 0; lbl < unpol; ++lbl)
        os << p << "," << degree << "," << lbl << ",0\n";
    // polarized labels: discrete logs of the norm-one subgroup of F_{p^2}^x,
    // which is generated by t^(p-1)
    for (u64 k = 0; k < pol; ++k)
        os << p << "," << degree << "," << k * (p - 1) << ",1\n";
    return os.str();
}

}  // namespace dmt
