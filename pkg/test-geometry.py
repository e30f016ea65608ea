"""测试弱锥端的构造、认证与球面数据"""

import math

from errors import CertificationError, DomainError
from geometry import (
    EndDescription,
    LinkSpec,
    build_end,
    certification_grid,
    certify_weakly_conical,
    exact_cone,
    sphere_data,
)
from logger.logging import setup_logger

setup_logger()


def perturbed(delta: float, r_inner: float = 10.0, n: int = 3):
    return build_end(EndDescription(model="perturbed_cone", n=n, r_inner=r_inner, delta=delta))


def test_links():
    """测试链接的本征模表"""
    print("测试1: 圆球面 μ = l(l+n−2)/c² 且与 Rayleigh 商一致")
    link = LinkSpec.round(3)
    assert link.mode(2).eigenvalue == 6.0, f"S² 上 l=2 的本征值应为 6，实际 {link.mode(2).eigenvalue}"
    for mode in link.modes:
        assert abs(mode.rayleigh_quotient - mode.eigenvalue) < 1e-14, f"l={mode.degree} 的 Rayleigh 商不一致"
    assert abs(link.volume - 4 * math.pi) < 1e-12, f"单位 S² 体积应为 4π，实际 {link.volume}"
    print("  ✅ 通过\n")

    print("测试2: 圆周 μ = k²/c²")
    circle = LinkSpec.round(2, radius=2.0)
    assert abs(circle.mode(3).eigenvalue - 9 / 4) < 1e-14, f"k=3, c=2 应得 9/4，实际 {circle.mode(3).eigenvalue}"
    assert abs(circle.volume - 4 * math.pi) < 1e-12, f"半径 2 的圆周长应为 4π，实际 {circle.volume}"
    print("  ✅ 通过\n")

    print("测试3: 未列表的模抛出 DomainError")
    try:
        link.mode(7)
    except DomainError:
        print("  ✅ 通过\n")
    else:
        raise AssertionError("应该抛出 DomainError")


def test_certification():
    """测试 Λ 的认证"""
    print("测试1: 精确锥 Λ = 0")
    end = exact_cone(3, r_inner=10.0)
    assert end.lam == 0.0 and end.certification.passed, f"精确锥 Λ 应为 0，实际 {end.lam}"
    print("  ✅ 通过\n")

    print("测试2: 扰动锥 δ=0.1, n=3 的 Λ 在 2√2·δ 的 5% 以内")
    end = perturbed(0.1)
    target = 2 * math.sqrt(2) * 0.1
    report = end.certification
    print(f"  Λ = {end.lam:.6f}, raw sup = {report.raw_sup:.6f}, 目标 {target:.6f}")
    assert abs(report.raw_sup / target - 1) < 0.01, f"r² 上确界应接近 {target}，实际 {report.raw_sup}"
    assert abs(end.lam / target - 1) <= 0.05 + 1e-9, f"Λ 应在目标的 5% 以内，实际 {end.lam}"
    assert report.radial_sup == 0.0, "加性扭曲下 |∇r| = 1，梯度项应为 0"
    print("  ✅ 通过\n")

    print("测试3: Λ/R_inner² > 1/2 时构造失败并报告 R_inner")
    try:
        perturbed(2.0, r_inner=2.0)
    except CertificationError as e:
        assert e.context["radius"] == 2.0, f"违规半径应为 2，实际 {e.context}"
        assert e.context["quantity"] == "hessian", f"违规量应为 hessian，实际 {e.context}"
        print(f"  捕获: {e}")
        print("  ✅ 通过\n")
    else:
        raise AssertionError("应该抛出 CertificationError")

    print("测试4: 增大 R_inner 不会增大 Λ")
    lams = [perturbed(0.1, r_inner=r).lam for r in (5.0, 10.0, 20.0)]
    assert all(b <= a + 1e-15 for a, b in zip(lams, lams[1:])), f"Λ 应单调不增: {lams}"
    print("  ✅ 通过\n")

    print("测试5: 采样点不足抛出 DomainError")
    try:
        certify_weakly_conical(end.model, certification_grid(10.0, 80.0, 50))
    except DomainError:
        print("  ✅ 通过\n")
    else:
        raise AssertionError("应该抛出 DomainError")


def test_sphere_data():
    """测试 S_ρ 上的面积、平均曲率与向量场差"""
    print("测试1: 精确锥 n=3, ρ=5")
    data = sphere_data(exact_cone(3, r_inner=2.0), 5.0)
    assert abs(data.area - 4 * math.pi * 25) < 1e-10, f"面积应为 100π，实际 {data.area}"
    assert abs(data.mean_curvature - 0.4) < 1e-15, f"H 应为 2/5，实际 {data.mean_curvature}"
    assert data.grad_r == 1.0 and data.gap_dr_n == 0.0 and data.gap_n_x == 0.0, "精确锥上的差应为 0"
    print("  ✅ 通过\n")

    print("测试2: 扰动锥 δ=0.1, ρ=5 的平均曲率")
    end = perturbed(0.1, r_inner=2.0)
    data = sphere_data(end, 5.0)
    expected = 2 * 10.0 / (2 * 25.1)
    assert abs(data.mean_curvature - expected) < 1e-14, f"H 应为 {expected}，实际 {data.mean_curvature}"
    assert abs(data.mean_curvature - 2 / 5) <= 2 * 0.1 / 125 * 2, "与 (n−1)/ρ 的偏差超出 2δ(n−1)/ρ³"
    print("  ✅ 通过\n")

    print("测试3: 向量场差满足 2Λr⁻⁴, 4Λr⁻⁴, 6Λr⁻⁴")
    for rho in (2.0, 5.0, 20.0):
        data = sphere_data(end, rho)
        bound = end.lam / rho**4
        assert data.gap_dr_n <= 2 * bound and data.gap_n_x <= 4 * bound and data.gap_dr_x <= 6 * bound, f"ρ={rho} 超界"
    print("  ✅ 通过\n")

    print("测试4: ρ < R_inner 抛出 DomainError")
    try:
        sphere_data(end, 1.5)
    except DomainError:
        print("  ✅ 通过\n")
    else:
        raise AssertionError("应该抛出 DomainError")

    print("所有测试通过！✅")


if __name__ == "__main__":
    test_links()
    test_certification()
    test_sphere_data()
