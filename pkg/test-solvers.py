"""测试径向 ODE、渐近种子、自相似剖面与指数拟合"""

import csv
import math
import tempfile
from pathlib import Path

import numpy as np

from errors import DomainError, SeedError
from geometry import EndDescription, build_end, exact_cone
from logger.logging import setup_logger
from solvers import (
    ExponentialCombination,
    ExpressionProfile,
    ModeRate,
    PlaneProfile,
    SeedBranch,
    SelfSimilarKind,
    abel_variation,
    asymptotic_seed,
    curvature_residual,
    decaying_mode_rate,
    decompose_basis,
    export_profile_csv,
    graph_difference,
    integrate_branch,
    integrate_profile,
    radial_coefficients,
    scaled_distance,
    slope_from_state,
    solve_selfsimilar_pair,
    solve_selfsimilar_profile,
)

setup_logger()

CONE = exact_cone(3)


def shrinker_ode(lam: float = 0.5, mu_link: float = 0.0, n: int = 3):
    end = CONE if n == 3 else exact_cone(n)
    return radial_coefficients(end, 0.0, lam, mu_link, "minus")


def expander_ode(n: int):
    return radial_coefficients(exact_cone(n), 0.0, -0.5, 0.0, "plus")


def test_radial_ode():
    """测试径向系数与渐近种子"""
    print("测试1: 精确锥上 p = (n−1)/r + m/r ∓ r/2, q = λ − μ/r²")
    ode = radial_coefficients(CONE, 1.0, 0.5, 2.0, "minus")
    assert abs(ode.p(4.0) - (2 / 4 + 1 / 4 - 2.0)) < 1e-15, f"p(4) 错误: {ode.p(4.0)}"
    assert abs(ode.q(4.0) - (0.5 - 2.0 / 16)) < 1e-15, f"q(4) 错误: {ode.q(4.0)}"
    plus = radial_coefficients(CONE, 0.0, -0.5, 0.0, "plus")
    assert abs(plus.p(4.0) - (2 / 4 + 2.0)) < 1e-15, f"L⁺ 的 p(4) 错误: {plus.p(4.0)}"
    print("  ✅ 通过\n")

    print("测试2: 慢分支递推在 μ=2, λ=0 时终止于 1 + 2/r²")
    seed = asymptotic_seed(shrinker_ode(0.0, 2.0), SeedBranch.SLOW, 30.0)
    assert seed.exact and seed.coefficients == (1.0, 2.0), f"系数应为 (1, 2)，实际 {seed.coefficients}"
    seed = asymptotic_seed(shrinker_ode(0.5), SeedBranch.SLOW, 30.0)
    assert seed.exact and seed.exponent == 1.0 and seed.coefficients == (1.0, -2.0), f"λ=½ 应得 r − 2/r，实际 {seed}"
    print("  ✅ 通过\n")

    print("测试3: Gauss 分支指数 r^{-n-1}e^{r²/4} 与系数 12, 180")
    seed = asymptotic_seed(shrinker_ode(0.5), SeedBranch.GAUSSIAN, 11.0)
    assert seed.exponent == -4.0 and seed.gauss == 1, f"指数错误: μ={seed.exponent}, γ={seed.gauss}"
    assert seed.coefficients[1] == 12.0 and seed.coefficients[2] == 180.0, f"系数错误: {seed.coefficients[:3]}"
    for n, c1 in ((2, -9.0), (3, -12.0)):
        decaying = asymptotic_seed(expander_ode(n), SeedBranch.GAUSSIAN, 14.0)
        assert decaying.exponent == -(n + 1) and decaying.gauss == -1, f"n={n} 衰减模指数错误"
        assert decaying.coefficients[1] == c1, f"n={n} 的 c₁ 应为 {c1}，实际 {decaying.coefficients[1]}"
    print(f"  Gauss 种子阶数 {seed.order}, 2R 处相对残差 {seed.relative_residual(22.0):.2e}")
    assert seed.relative_residual(22.0) < 1e-12, "截断级数在 2R 处残差过大"
    print("  ✅ 通过\n")

    print("测试4: 级数在 R 处不递减时抛出 SeedError")
    for order in (None, 3):
        try:
            asymptotic_seed(shrinker_ode(0.0, 50.0), SeedBranch.SLOW, 5.0, order=order)
        except SeedError as e:
            assert e.context["R"] == 5.0, f"上下文应包含 R: {e.context}"
        else:
            raise AssertionError(f"order={order} 应该抛出 SeedError")
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


def test_integration():
    """测试积分、Abel 恒等式与基分解"""
    print("测试1: L₀ 1 = 0 的常数解保持为 1")
    ode = shrinker_ode(0.0)
    profile = integrate_profile(ode, (2.0, 1.0, 0.0), 10.0)
    assert abs(profile.value(10.0) - 1.0) < 1e-10, f"f(10) 应为 1，实际 {profile.value(10.0)}"
    print("  ✅ 通过\n")

    print("测试2: R=30 的慢种子向内积分得 f(20) = 1 + 2/400，R 以外保留级数尾")
    ode = shrinker_ode(0.0, 2.0)
    profile = integrate_profile(ode, asymptotic_seed(ode, "slow", 30.0), 20.0)
    assert abs(profile.value(20.0) - 1.005) < 1e-9, f"f(20) = {profile.value(20.0)}"
    assert abs(profile.value(40.0) - (1 + 2 / 1600)) < 1e-15, "尾部应为种子级数"
    print("  ✅ 通过\n")

    print("测试3: 慢分支与 Gauss 分支的 Abel 恒等式")
    ode = shrinker_ode(0.5)
    slow = integrate_profile(ode, asymptotic_seed(ode, "slow", 30.0), 5.0, rtol=1e-12)
    gaussian = integrate_branch(ode, asymptotic_seed(ode, "gaussian", 11.0), 5.0, 20.0, rtol=1e-12)
    variation = abel_variation(ode, slow, gaussian, np.linspace(8.0, 14.0, 50))
    print(f"  max |I/I₀ − 1| = {variation:.2e}")
    assert variation < 1e-9, f"Abel 恒等式偏差过大: {variation}"
    print("  ✅ 通过\n")

    print("测试4: 一般解分解为慢分支与 Gauss 分支")
    solution = integrate_profile(ode, (5.0, 1.3, -0.7), 20.0, rtol=1e-12)
    decomposition = decompose_basis(solution, slow, gaussian, window=(10.0, 20.0))
    print(f"  a={decomposition.slow_coefficient:.6g}, b={decomposition.gaussian_coefficient:.6g}, 残差 {decomposition.residual:.2e}")
    assert decomposition.residual <= 1e-6, f"分解残差过大: {decomposition.residual}"
    print("  ✅ 通过\n")

    print("测试5: 剖面导出 CSV 表头")
    with tempfile.TemporaryDirectory() as tmp:
        path = export_profile_csv(slow, [6.0, 7.0, 8.0], Path(tmp) / "profile.csv")
        with open(path, encoding="utf-8") as f:
            rows = list(csv.reader(f))
    assert rows[0] == ["r", "f", "df", "d2f"], f"表头错误: {rows[0]}"
    assert abs(float(rows[1][1]) - (6.0 - 2 / 6.0)) < 1e-9, f"f(6) 错误: {rows[1]}"
    print("  ✅ 通过\n")

    print("测试6: 指数组合剖面 2e^{−r}r − e^{−2r} 的闭式导数")
    combination = ExpressionProfile.exponential_combination([(2.0, 1.0, 1.0), (-1.0, 2.0, 0.0)])
    assert isinstance(combination, ExponentialCombination), f"类型错误: {type(combination)}"
    r = 3.0
    expected = (
        2 * math.exp(-r) * r - math.exp(-2 * r),
        2 * math.exp(-r) * (1 - r) + 2 * math.exp(-2 * r),
        2 * math.exp(-r) * (r - 2) - 4 * math.exp(-2 * r),
    )
    for got, want in zip(combination.derivatives(r), expected):
        assert abs(got - want) < 1e-14, f"导数错误: {combination.derivatives(r)} vs {expected}"
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


def test_rate_fits():
    """测试衰减模的指数拟合"""
    print("测试1: Gauss 分支拟合 (α, β) = (−4, ¼)")
    ode = shrinker_ode(0.5)
    gaussian = integrate_branch(ode, asymptotic_seed(ode, "gaussian", 11.0), 6.0, 20.0, rtol=1e-12)
    fit = decaying_mode_rate(gaussian, ModeRate(-4.0, 0.25))
    print(f"  α̂={fit.alpha_hat:.4f}, β̂={fit.beta_hat:.5f}")
    assert fit.passed, f"拟合未通过: {fit}"
    print("  ✅ 通过\n")

    print("测试2: 慢分支拟合 (α, β) = (1, 0)")
    slow = integrate_profile(ode, asymptotic_seed(ode, "slow", 30.0), 6.0)
    fit = decaying_mode_rate(slow, (1.0, 0.0))
    assert fit.passed and abs(fit.beta_hat) < 1e-4, f"拟合未通过: {fit}"
    print("  ✅ 通过\n")

    print("测试3: 扩张子衰减模拟合 (−(n+1), −¼)")
    for n in (2, 3):
        plus = expander_ode(n)
        mode = integrate_profile(plus, asymptotic_seed(plus, "gaussian", 14.0), 6.0, rtol=1e-12)
        fit = decaying_mode_rate(mode, (-(n + 1.0), -0.25))
        print(f"  n={n}: α̂={fit.alpha_hat:.4f}, β̂={fit.beta_hat:.5f}")
        assert fit.passed, f"n={n} 拟合未通过: {fit}"
    print("  ✅ 通过\n")

    print("测试4: 窗口过短抛出 DomainError")
    try:
        decaying_mode_rate(slow, window=(8.0, 10.0))
    except DomainError:
        print("  ✅ 通过\n")
    else:
        raise AssertionError("应该抛出 DomainError")

    print("所有测试通过！✅")


def test_selfsimilar():
    """测试自缩子与自扩张子图剖面"""
    print("测试1: 平面是两类方程的精确解")
    for kind in SelfSimilarKind:
        plane = solve_selfsimilar_profile(kind, 3, slope=0.0)
        assert isinstance(plane, PlaneProfile), "斜率 0 应返回平面"
        assert curvature_residual(plane, 3, kind, 5.0) == 0.0, f"{kind.value} 平面残差不为 0"
    print("  ✅ 通过\n")

    print("测试2: n=2 扩张子内部数据 (1, ½, ½) 的斜率收敛")
    profile = solve_selfsimilar_profile("expander", 2, inner=(1.0, 0.5, 0.5))
    _, du, _ = profile.derivatives(40.0)
    early = slope_from_state(SelfSimilarKind.EXPANDER, 2, 40.0, du)
    print(f"  s(40) = {early:.10f}, s(60) = {profile.slope:.10f}")
    assert abs(early - profile.slope) < 1e-6, "斜率未收敛"
    c1 = (2 - 1) * profile.slope
    for rho in (20.0, 30.0, 40.0):
        u = profile.value(rho)
        scaled = rho**3 * abs(u - profile.slope * rho - c1 / rho)
        assert scaled < 10.0, f"ρ={rho}: ρ³|u − sρ − c₁/ρ| = {scaled}"
    assert curvature_residual(profile, 2, "expander", 10.0) < 1e-10, "曲率残差过大"
    print("  ✅ 通过\n")

    print("测试3: 斜率 1 的扩张子端通过弱锥认证")
    expander = solve_selfsimilar_profile("expander", 3, slope=1.0)
    end = build_end(EndDescription(model="selfsimilar_end", n=3, r_inner=10.0, profile=expander))
    assert end.certification.passed and math.isfinite(end.lam), f"认证失败: Λ={end.lam}"
    assert abs(end.model.link_radius - 1 / math.sqrt(2)) < 1e-15, "链接半径应为 1/√2"
    print(f"  Λ = {end.lam:.4g}")
    print("  ✅ 通过\n")

    print("测试4: 两类参数同时给出抛出 DomainError")
    try:
        solve_selfsimilar_profile("shrinker", 3, inner=(1.0, 0.0, 0.0), slope=1.0)
    except DomainError:
        print("  ✅ 通过\n")
    else:
        raise AssertionError("应该抛出 DomainError")

    print("所有测试通过！✅")


def test_graph_difference():
    """测试同锥扩张子对的法向高度差"""
    print("测试1: A≠0 时标度距离 r^{n+1}e^{r²/4}dist 收敛到常数")
    pair = solve_selfsimilar_pair("expander", 3, slope=0.0, amplitude=1.0)
    end = build_end(EndDescription(model="selfsimilar_end", n=3, r_inner=6.0, profile=pair.base))
    u, certificate = graph_difference(pair.base, pair, end, region=(8.0, 14.0))
    assert certificate.passed, f"差函数证书未通过: {certificate}"
    distance = scaled_distance(u, np.linspace(8.0, 14.0, 25), pair.correction)
    print(f"  归一化变化 {distance.variation:.2e}, 原始变化 {distance.raw_variation:.2e}")
    assert distance.variation < 0.05, f"标度距离变化过大: {distance.variation}"
    assert abs(distance.normalized[0] - 1.0) < 1e-3, f"归一化距离应接近振幅 1，实际 {distance.normalized[0]}"
    print("  ✅ 通过\n")

    print("测试2: A=0 时差函数恒为零")
    zero = solve_selfsimilar_pair("expander", 3, slope=0.0, amplitude=0.0)
    end = build_end(EndDescription(model="selfsimilar_end", n=3, r_inner=6.0, profile=zero.base))
    u, certificate = graph_difference(zero.base, zero, end, region=(8.0, 14.0))
    distance = scaled_distance(u, np.linspace(8.0, 14.0, 25), zero.correction)
    assert distance.identically_zero and certificate.kappa == 0.0, "A=0 应得恒零距离"
    print("  ✅ 通过\n")

    print("测试3: 相同自缩子 κ = 0；不同斜率的 κ 无界")
    first = solve_selfsimilar_profile("shrinker", 3, slope=1.0)
    end = build_end(EndDescription(model="selfsimilar_end", n=3, r_inner=10.0, profile=first))
    _, same = graph_difference(first, first, end)
    assert same.kappa == 0.0 and same.passed, f"相同剖面应得 κ=0，实际 {same.kappa}"
    second = solve_selfsimilar_profile("shrinker", 3, slope=1.1)
    _, different = graph_difference(first, second, end)
    print(f"  κ 增长指数 {different.kappa_growth:.3f}")
    assert not different.passed and not different.kappa_bounded, f"不同斜率的 κ 应无界，增长指数 {different.kappa_growth}"
    print("  ✅ 通过\n")

    print("测试4: 自缩子不能构造同锥对")
    try:
        solve_selfsimilar_pair("shrinker", 3)
    except DomainError:
        print("  ✅ 通过\n")
    else:
        raise AssertionError("应该抛出 DomainError")

    print("所有测试通过！✅")


if __name__ == "__main__":
    test_radial_ode()
    test_integration()
    test_rate_fits()
    test_selfsimilar()
    test_graph_difference()
