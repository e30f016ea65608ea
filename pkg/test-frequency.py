"""测试频率泛函、恒等式、ξ 极限与尾部估计"""

import csv
import math
import tempfile
from pathlib import Path

from errors import DomainError
from frequency import (
    TRACE_CSV_HEADER,
    InequalityParameters,
    boundary_quantities,
    bulk_quantities,
    check_identities,
    extract_xi,
    flux_monotonicity,
    frequency_grid,
    frequency_trace,
    harnack_check,
    nhat_bound_radius,
    poincare_check,
    small_drift_check,
    tail_estimate,
    vanishing_radius,
    verify_inequalities,
)
from geometry import EndDescription, build_end, exact_cone
from logger.logging import setup_logger
from operators import DriftOperator, EigenContext, OperatorSign, separated
from quadrature import WeightSpec, integrate_radial
from solvers import (
    ExpressionProfile,
    PowerProfile,
    SeedBranch,
    SeriesProfile,
    asymptotic_seed,
    integrate_profile,
    radial_coefficients,
    scale_profile,
)

setup_logger()

N = 3
CONE = exact_cone(N)
SPHERE_AREA = 4 * math.pi


def slow_mode(n: int, degree: int, m: float = 0.0, R: float = 10.0):
    """λ = 0 的慢分支 f = 1 + μr^{-2} + …，取自渐近级数"""
    end = CONE if n == N else exact_cone(n)
    mu_link = end.link.mode(degree).eigenvalue
    ode = radial_coefficients(end, m, 0.0, mu_link, "minus")
    seed = asymptotic_seed(ode, SeedBranch.SLOW, R)
    return separated(end, seed.profile(), degree, EigenContext(DriftOperator.minus(m), 0.0), label=f"mode(n={n}, μ={mu_link:g})")


def test_boundary_and_bulk():
    """测试 B、F、D̂、L̂"""
    print("测试1: u ≡ 1, n=3, ρ=5 时 B = 100π, F = 0")
    one = separated(CONE, ExpressionProfile.constant(1.0))
    boundary = boundary_quantities(one, 5.0)
    assert abs(boundary.B.value - 100 * math.pi) < 1e-12 * 100 * math.pi, f"B = {boundary.B.value}"
    assert boundary.F.value == 0.0, f"F = {boundary.F.value}"
    print("  ✅ 通过\n")

    print("测试2: u = r 时 N(ρ) = −1")
    r = separated(CONE, PowerProfile(1.0))
    for rho in (3.0, 10.0, 40.0):
        frequency = boundary_quantities(r, rho).frequency
        assert abs(frequency + 1.0) < 1e-14, f"ρ={rho}: N = {frequency}"
    print("  ✅ 通过\n")

    print("测试3: u ≡ 1 时 D̂ = L̂ = 0；u = a(θ) 时 D̂ = μ‖a‖²∫r^{n−3}Φ_m")
    bulk = bulk_quantities(one, 0.0, 5.0)
    assert bulk.d_hat.scaled == 0.0 and bulk.l_hat.scaled == 0.0, "常函数的能量应为 0"
    mode = separated(CONE, ExpressionProfile.constant(1.0), 1)
    for m in (-2.0, 0.0, 2.0):
        bulk = bulk_quantities(mode, m, 5.0)
        expected = integrate_radial(lambda t: 1.0, WeightSpec.gaussian(m + N - 3), 5.0)
        ref = expected.log_scale
        value = bulk.d_hat.relative_to(ref)
        target = mode.mu_link * mode.norm_sq * expected.relative_to(ref)
        assert abs(value - target) < 1e-8 * target, f"m={m}: D̂ = {value}, 应为 {target}"
    print("  ✅ 通过\n")

    print("测试4: ODE 精确解的 ∫u(L+λ)uΦ 在求积精度内为 0")
    ode = radial_coefficients(CONE, 0.0, 0.25, 0.0, "minus")
    profile = integrate_profile(ode, asymptotic_seed(ode, "slow", 30.0), 5.0, rtol=1e-10)
    u = separated(CONE, profile, 0, EigenContext(DriftOperator.minus(0.0), 0.25))
    bulk = bulk_quantities(u, 0.0, 8.0)
    ref = bulk.l_hat.log_scale
    shifted = abs(bulk.l_shifted.relative_to(ref))
    assert shifted < 1e-7 * abs(bulk.l_hat.relative_to(ref)), f"平移积分 {shifted} 不够小"
    print("  ✅ 通过\n")

    print("测试5: Gauss 分支不可积，抛出 DomainError")
    gaussian = separated(CONE, SeriesProfile((1.0, 12.0), -4.0, 1))
    try:
        bulk_quantities(gaussian, 0.0, 10.0)
    except DomainError as e:
        print(f"  斜率 {e.context['gaussian_slope']:.3f}")
        print("  ✅ 通过\n")
    else:
        raise AssertionError("应该抛出 DomainError")

    print("所有测试通过！✅")


def test_trace_and_xi():
    """测试频率轨迹与 ξ 的外推"""
    grid = frequency_grid(10.0, 80.0)

    print("测试1: u ≡ 1 时 N ≡ 0, N̂ ≡ 0, ξ̂ = 0")
    trace = frequency_trace(separated(CONE, ExpressionProfile.constant(1.0)), 0.0, grid)
    assert not trace.trivial, "u ≡ 1 不是平凡的"
    assert all(row.N == 0.0 and row.N_hat == 0.0 for row in trace.rows), "频率应恒为 0"
    assert extract_xi(trace).xi_hat == 0.0, "ξ̂ 应为 0"
    print("  ✅ 通过\n")

    print("测试2: 归一化收缩分支 û = 1 − (n−1)/r²：N = −2(n−1)/(ρ² − (n−1))，ξ̂ = 0")
    shrinker = separated(CONE, SeriesProfile((1.0, -(N - 1.0)), 0.0, 0), label="normalized shrinker")
    trace = frequency_trace(shrinker, 0.0, grid)
    for row in trace.rows:
        expected = -2 * (N - 1) / (row.rho**2 - (N - 1))
        assert abs(row.N - expected) < 1e-12 * abs(expected), f"ρ={row.rho}: N = {row.N}"
    estimate = extract_xi(trace)
    print(f"  ξ̂ = {estimate.xi_hat:.3e}")
    assert abs(estimate.xi_hat) < 1e-3, f"ξ̂ 应为 0，实际 {estimate.xi_hat}"
    print("  ✅ 通过\n")

    print("测试3: 慢分支模式 ξ̂ = 2μ_link（1% 以内），N̂ ≤ ρ^{-2}max(2ξ̂, 1) 自 ρ ≤ 20 起成立")
    for n, degrees in ((2, (1, 2)), (3, (1, 2))):
        for degree in degrees:
            for m in (-2.0, 0.0, 2.0):
                u = slow_mode(n, degree, m)
                trace = frequency_trace(u, m, grid)
                estimate = extract_xi(trace)
                target = 2 * u.mu_link
                print(f"  n={n}, μ={u.mu_link:g}, m={m:g}: ξ̂ = {estimate.xi_hat:.6f}")
                assert abs(estimate.xi_hat - target) < 0.01 * target, f"ξ̂ 应为 {target}"
                bound_radius = nhat_bound_radius(trace, estimate.xi_hat)
                assert bound_radius is not None and bound_radius <= 20.0, f"N̂ 上界自 {bound_radius} 起才成立"
                vanishing = vanishing_radius(trace, 1e-2)
                limit = 30.0 if target / 30.0**2 < 1e-2 else math.sqrt(2 * target / 1e-2)
                assert vanishing is not None and vanishing <= limit, f"频率在 {vanishing} 才小于 10⁻²"
    print("  ✅ 通过\n")

    print("测试4: N 与 N̂ 在 u ↦ cu 下不变 (c = 10^{±8})")
    u = slow_mode(3, 1)
    base = frequency_trace(u, 0.0, grid[:5])
    for c in (1e-8, 1e8):
        scaled = frequency_trace(u.with_profile(scale_profile(u.profile, c), u.context), 0.0, grid[:5])
        for a, b in zip(base.rows, scaled.rows):
            assert abs(a.N - b.N) <= 1e-12 * abs(a.N) and abs(a.N_hat - b.N_hat) <= 1e-12 * a.N_hat, f"c={c} 改变了频率"
    print("  ✅ 通过\n")

    print("测试5: u ≡ 0 给出平凡结论")
    trace = frequency_trace(separated(CONE, ExpressionProfile.constant(0.0)), 0.0, grid[:4])
    assert trace.trivial and trace.trivial_from == grid[0], "应判定为平凡"
    assert extract_xi(trace).xi_hat == 0.0, "平凡轨迹的 ξ̂ 为 0"
    print("  ✅ 通过\n")

    print("测试6: CSV 表头")
    with tempfile.TemporaryDirectory() as tmp:
        path = frequency_trace(u, 0.0, grid[:3]).export_csv(Path(tmp) / "trace.csv")
        with open(path, encoding="utf-8") as f:
            rows = list(csv.reader(f))
    assert rows[0] == TRACE_CSV_HEADER and len(rows) == 4, f"CSV 错误: {rows[0]}"
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


def test_identities():
    """测试 B′、B̂′、F̂ = D̂ + L̂、D̂′、N̂′ 恒等式"""
    print("测试1: 精确锥上的本征模式")
    report = check_identities(slow_mode(3, 1), 0.0, 10.0)
    for residual in report.residuals:
        print(f"  {residual.name}: {residual.relative_residual:.2e}")
    assert report.get("flux_energy").relative_residual < 1e-8, "F̂ − D̂ − L̂ 过大"
    assert report.worst < 1e-6, f"最大相对残差 {report.worst}"
    assert len(report.residuals) == 5, "L_m 下应检查五个恒等式"
    print("  ✅ 通过\n")

    print("测试2: 非本征函数 u = e^{−r}·a, m = 2")
    u = separated(CONE, ExpressionProfile.exponential_combination([(1.0, 1.0, 0.0)]), 1)
    report = check_identities(u, 2.0, 10.0, h=5e-4)
    assert report.get("flux_energy").relative_residual < 1e-8, "F̂ − D̂ − L̂ 过大"
    assert report.worst < 1e-6, f"最大相对残差 {report.worst}"
    print("  ✅ 通过\n")

    print("测试3: L⁺ 只检查边界与通量恒等式")
    ode = radial_coefficients(CONE, 0.0, -0.5, 0.0, "plus")
    decaying = separated(CONE, integrate_profile(ode, asymptotic_seed(ode, "gaussian", 14.0), 6.0, rtol=1e-11))
    report = check_identities(decaying, 0.0, 10.0, h=2e-4, sign=OperatorSign.PLUS)
    assert [r.name for r in report.residuals] == ["boundary_norm", "weighted_boundary_norm", "flux_energy"], "L⁺ 恒等式列表错误"
    assert report.worst < 1e-6, f"最大相对残差 {report.worst}"
    print("  ✅ 通过\n")

    print("测试4: 差分模板越过内半径时抛出 DomainError")
    try:
        check_identities(slow_mode(3, 1), 0.0, 2.001, h=0.01)
    except DomainError:
        print("  ✅ 通过\n")
    else:
        raise AssertionError("应该抛出 DomainError")

    print("测试5: 扰动锥 (δ = 0.1) 上的本征模式：L̂ 求积收敛且恒等式在 10Λρ⁻² 误差内成立")
    warped = build_end(EndDescription(model="perturbed_cone", n=N, r_inner=10.0, r_max=80.0, delta=0.1))
    ode = radial_coefficients(warped, 0.0, 0.0, warped.link.mode(1).eigenvalue, "minus")
    mode = separated(warped, integrate_profile(ode, asymptotic_seed(ode, SeedBranch.SLOW, 60.0), 10.0), 1)
    for rho in (12.0, 20.0):
        bulk = bulk_quantities(mode, 0.0, rho)
        assert abs(bulk.l_hat.scaled) <= 1e-6 * abs(bulk.d_hat.relative_to(bulk.l_hat.log_scale)), f"ρ={rho}: L̂ 应远小于 D̂"
        report = check_identities(mode, 0.0, rho)
        allowance = 10.0 * warped.lam / rho**2
        assert report.get("flux_energy").relative_residual < 1e-8 + allowance, f"ρ={rho}: F̂ − D̂ − L̂ 过大"
        assert report.worst < 1e-6 + allowance, f"ρ={rho}: 最大相对残差 {report.worst}"
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


def test_inequalities():
    """测试 Poincaré、Harnack、尾部估计与 Ψ 加权族"""
    print("测试1: u = e^{−r}, R ∈ {10, 15, 20} 的 Poincaré 不等式")
    u = separated(CONE, ExpressionProfile.exponential_combination([(1.0, 1.0, 0.0)]))
    check = poincare_check(u, 0.0, (10.0, 15.0, 20.0))
    assert check.passed and all(p.holds for p in check.points), f"Poincaré 不成立: {check.points}"
    print("  ✅ 通过\n")

    print("测试2: μ_link = 2 慢分支在 R = 20 的 Harnack 括号")
    mode = slow_mode(3, 1)
    check = harnack_check(mode, (20.0,), (1.0, 2.0))
    assert all(p.holds for p in check.points), f"Harnack 括号不成立: {check.points}"
    print("  ✅ 通过\n")

    print("测试3: λ = 0 的尾部估计 K₈ 有限且随 R 稳定，α² = ‖a‖²")
    report = verify_inequalities(mode, 0.0, InequalityParameters(radii=(10.0, 15.0, 20.0)))
    tail = report.tails[0]
    print(f"  K8 = {tail.constant:.4f}, K2 = {report.constants['K2']:.3g}, α² = {report.alpha_sq:.8f}")
    assert report.passed, "不等式报告应通过"
    assert tail.constant_name == "K8" and tail.anchor == "tail-estimate-degree-0", "λ = 0 应报告 K8"
    assert max(tail.first_display) < 2 * min(tail.first_display), "K8 随 R 不稳定"
    assert abs(report.alpha_sq - SPHERE_AREA) < 1e-6 * SPHERE_AREA, f"α² 应为 4π，实际 {report.alpha_sq}"
    assert report.constants["K2"] == 0.0, "精确解的 L̂ 为 0，K₂ 应为 0"
    print("  ✅ 通过\n")

    print("测试4: u = r 的 2λ = 1 次尾部估计，两式常数分别为 2 与 1")
    r = separated(CONE, PowerProfile(1.0))
    tail = tail_estimate(r, 0.5, (10.0, 20.0))
    assert tail.constant_name == "K0", "λ ≠ 0 应报告 K0"
    assert all(abs(k - 2.0) < 1e-8 for k in tail.first_display), f"第一式常数 {tail.first_display}"
    assert all(abs(k - 1.0) < 1e-8 for k in tail.second_display), f"第二式常数 {tail.second_display}"
    print("  ✅ 通过\n")

    print("测试5: 扩张子衰减模的 Ψ 加权族 (λ = −½)")
    ode = radial_coefficients(CONE, 0.0, -0.5, 0.0, "plus")
    decaying = separated(CONE, integrate_profile(ode, asymptotic_seed(ode, "gaussian", 14.0), 6.0, rtol=1e-11), label="decaying")
    report = verify_inequalities(decaying, 0.0, InequalityParameters(radii=(8.0, 10.0, 12.0), lam=-0.5, sign=OperatorSign.PLUS))
    print(f"  常数 {report.constants}, α² = {report.alpha_sq:.8f}")
    assert report.passed, f"Ψ 加权检查失败: {report.thresholds}"
    assert report.constants["K10"] == 0.0, "ΨF 单调递减时 K₁₀ 为 0"
    assert report.strong_decay.hypothesis and all(report.strong_decay.integrable.values()), "强衰减定理应适用"
    assert abs(report.alpha_sq - SPHERE_AREA) < 1e-4 * SPHERE_AREA, f"Ψ_4 u 的 α² 应为 4π，实际 {report.alpha_sq}"
    print("  ✅ 通过\n")

    print("测试6: 所需常数随半径增长时 K₂ 与 K₁₀ 的检查不通过")
    steep = separated(CONE, PowerProfile(6.0), 1)
    check = small_drift_check(steep, 0.0, (10.0, 20.0, 40.0))
    assert not check.passed, f"u = r⁶·a 的 L̂ 不是小漂移项: {check.points}"
    growing = separated(CONE, PowerProfile(-2.0))
    check = flux_monotonicity(growing, 0.0, [(10.0, 11.0), (20.0, 21.0), (40.0, 41.0)])
    print(f"  K10 = {check.constant:.4g}")
    assert not check.passed and check.constant > 40.0, f"u = r⁻² 的 ΨF 不单调: {check.points}"
    mode = slow_mode(3, 1)
    assert small_drift_check(mode, 0.0, (10.0, 20.0, 40.0)).passed, "本征模式的小漂移检查应通过"
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


if __name__ == "__main__":
    test_boundary_and_bulk()
    test_trace_and_xi()
    test_identities()
    test_inequalities()
