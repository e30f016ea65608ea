"""测试漂移算子、几乎本征函数证书与三类变换"""

import math

import numpy as np

from errors import CertificationError, DomainError
from geometry import exact_cone
from logger.logging import setup_logger
from operators import (
    DriftOperator,
    EigenContext,
    ResidualConvention,
    TransformKind,
    apply_operator,
    apply_scaled,
    certify_almost_eigen,
    compose_check,
    separated,
    transform,
)
from solvers import ExpressionProfile, PowerProfile, SeriesProfile, asymptotic_seed, integrate_profile, radial_coefficients

setup_logger()

N = 3
CONE = exact_cone(N)
RADIUS_EIGEN = EigenContext(DriftOperator.minus(0.0), 0.5)


def radius_function():
    """u = r，(L_0 + ½) 的几乎本征函数"""
    return separated(CONE, PowerProfile(1.0), 0, RADIUS_EIGEN, label="r")


def test_apply_operator():
    """测试径向作用"""
    print("测试1: L_0 1 = 0")
    one = separated(CONE, ExpressionProfile.constant(1.0))
    assert apply_operator(DriftOperator.minus(0.0), CONE, one, 5.0) == 0.0, "L_0 1 应为 0"
    print("  ✅ 通过\n")

    print("测试2: L_m r^μ = −(μ/2)r^μ + μ(μ+n+m−2)r^{μ−2}")
    for mu, m, r in ((1.5, 1.0, 3.0), (-2.0, 0.0, 7.0), (0.5, -2.0, 12.0)):
        u = separated(CONE, PowerProfile(mu))
        expected = -0.5 * mu * r**mu + mu * (mu + N + m - 2) * r ** (mu - 2)
        value = apply_operator(DriftOperator.minus(m), CONE, u, r)
        assert abs(value - expected) <= 1e-13 * abs(expected), f"μ={mu}, m={m}: {value} ≠ {expected}"
    print("  ✅ 通过\n")

    print("测试3: Ψ_μ 与 Φ_μ 的精确恒等式（对数尺度，不溢出）")
    for mu, m in ((1.0, 0.0), (-0.5, 2.0), (2.0, -1.0)):
        coefficient = mu * (mu + N + m - 2)
        psi = separated(CONE, SeriesProfile((1.0,), mu, 1))
        phi = separated(CONE, SeriesProfile((1.0,), mu, -1))
        for r in (5.0, 20.0, 50.0):
            value, log_scale = apply_scaled(DriftOperator.minus(m), CONE, psi, r)
            lhs = value - 0.5 * (mu + N + m)
            assert abs(lhs - coefficient / r**2) < 1e-10, f"L_mΨ_μ 恒等式在 r={r} 失败: {lhs}"
            if r == 50.0:
                assert log_scale > 600, "r=50 时 Ψ_μ 应远超浮点范围"
            value, _ = apply_scaled(DriftOperator.plus(m), CONE, phi, r)
            ratio = r * r * (value + 0.5 * (mu + N + m))
            assert abs(ratio - coefficient) < 1e-8 * max(1.0, r * r), f"r²|L⁺Φ + ½(μ+n+m)Φ|/Φ 在 r={r} 不为常数: {ratio}"
    print("  ✅ 通过\n")

    print("测试4: r < R_inner 抛出 DomainError")
    try:
        apply_operator(DriftOperator.minus(0.0), CONE, one, 1.0)
    except DomainError:
        print("  ✅ 通过\n")
    else:
        raise AssertionError("应该抛出 DomainError")

    print("所有测试通过！✅")


def test_certificates():
    """测试几乎本征函数证书"""
    print("测试1: u ≡ 1, λ = 0 得 M = 0")
    one = separated(CONE, ExpressionProfile.constant(1.0))
    certificate = certify_almost_eigen(CONE, one, DriftOperator.minus(0.0), 0.0, (10.0, 40.0))
    assert certificate.M == 0.0 and certificate.passed, f"M 应为 0，实际 {certificate.M}"
    print("  ✅ 通过\n")

    print("测试2: u = r, λ = ½ 得 M = (n−1)·40/41")
    certificate = certify_almost_eigen(CONE, radius_function(), DriftOperator.minus(0.0), 0.5, (10.0, 40.0))
    expected = (N - 1) * 40 / 41
    print(f"  M = {certificate.M:.12f}, 增长指数 {certificate.growth_exponent:.4f}")
    assert abs(certificate.M - expected) < 1e-10, f"M 应为 {expected}"
    assert abs(certificate.M - (N - 1)) <= 10 / 10, "M 应在 n−1 的 10/R 以内"
    print("  ✅ 通过\n")

    print("测试3: ODE 精确解的残差不超过 100 × 容差")
    ode = radial_coefficients(CONE, 0.0, 0.25, 0.0, "minus")
    profile = integrate_profile(ode, asymptotic_seed(ode, "slow", 30.0), 5.0, rtol=1e-10)
    u = separated(CONE, profile, 0, EigenContext(DriftOperator.minus(0.0), 0.25))
    certificate = certify_almost_eigen(CONE, u, DriftOperator.minus(0.0), 0.25, (10.0, 25.0))
    assert certificate.M <= 100 * 1e-10, f"M = {certificate.M}"
    print("  ✅ 通过\n")

    print("测试4: 残差发散时抛出 CertificationError 并给出增长指数")
    try:
        certify_almost_eigen(CONE, radius_function(), DriftOperator.minus(0.0), 0.0, (10.0, 40.0))
    except CertificationError as e:
        print(f"  增长指数 {e.context['growth_exponent']:.3f}")
        assert e.context["growth_exponent"] > 1.5, "r² 型发散的增长指数应接近 2"
        print("  ✅ 通过\n")
    else:
        raise AssertionError("应该抛出 CertificationError")

    print("所有测试通过！✅")


def test_transforms():
    """测试幂变换与 Gauss 扭转"""
    print("测试1: 每类变换对 μ ∈ {±½, ±1} 重新认证")
    twisted_base = transform(radius_function(), TransformKind.GAUSS_TWIST, 0.0)
    for mu in (-1.0, -0.5, 0.5, 1.0):
        for kind, base in (
            (TransformKind.POWER, radius_function()),
            (TransformKind.GAUSS_TWIST, radius_function()),
            (TransformKind.INVERSE_GAUSS_TWIST, twisted_base),
        ):
            u = transform(base, kind, mu)
            context = u.require_context()
            certificate = certify_almost_eigen(CONE, u, context.operator, context.lam, (10.0, 40.0), context.convention)
            assert certificate.passed and math.isfinite(certificate.M), f"{kind.value}({mu}) 重新认证失败: M={certificate.M}"
    print("  ✅ 通过\n")

    print("测试2: u = r 经 power(1) 得 r³，对应 (L_{−4}, 3/2)")
    u = transform(radius_function(), "power", 1.0)
    context = u.require_context()
    assert context.operator == DriftOperator.minus(-4.0) and context.lam == 1.5, f"上下文错误: {context}"
    assert abs(u.profile.value(2.0) - 8.0) < 1e-13, "û(2) 应为 8"
    print("  ✅ 通过\n")

    print("测试3: power(μ = −λ) 得到 L_{4λ} 调和函数")
    u = transform(radius_function(), "power", -0.5)
    context = u.require_context()
    certificate = certify_almost_eigen(CONE, u, context.operator, context.lam, (10.0, 40.0))
    assert context.operator == DriftOperator.minus(2.0) and context.lam == 0.0, f"上下文错误: {context}"
    assert certificate.M < 1e-12, f"M′ = {certificate.M}"
    print("  ✅ 通过\n")

    print("测试4: inverse_gauss_twist ∘ gauss_twist = power")
    radii = np.linspace(3.0, 20.0, 30)
    for mu in (-1.0, -0.5, 0.5, 1.0):
        check = compose_check(radius_function(), mu, radii)
        assert check.max_relative_difference < 1e-12, f"μ={mu}: 差 {check.max_relative_difference}"
        assert check.operator_match and check.eigenvalue_difference < 1e-15, f"μ={mu}: 上下文不一致"
    print("  ✅ 通过\n")

    print("测试5: power(μ) ∘ power(−μ) 为恒等")
    u = radius_function()
    back = transform(transform(u, "power", 0.75), "power", -0.75)
    for r in radii:
        a, b = np.array(back.profile.derivatives(float(r))), np.array(u.profile.derivatives(float(r)))
        assert np.max(np.abs(a - b)) <= 1e-13 * np.max(np.abs(b)), f"r={r} 处不相等"
    assert back.require_context() == u.require_context(), "上下文应恢复"
    print("  ✅ 通过\n")

    print("测试6: gauss_twist 作用于 L⁺ 上下文、线性残差的 Gauss 扭转都抛出 DomainError")
    linear = radius_function().with_profile(PowerProfile(1.0), EigenContext(DriftOperator.minus(0.0), 0.5, ResidualConvention.LINEAR))
    for base, kind in ((twisted_base, TransformKind.GAUSS_TWIST), (linear, TransformKind.GAUSS_TWIST)):
        try:
            transform(base, kind, 0.5)
        except DomainError:
            pass
        else:
            raise AssertionError(f"{kind.value} 应该抛出 DomainError")
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


if __name__ == "__main__":
    test_apply_operator()
    test_certificates()
    test_transforms()
