"""测试 X 的流、链接度量、无穷远迹与齐次性界"""

import csv
import math
import tempfile
from pathlib import Path

from asymptotics import (
    CONVERGENCE_CSV_HEADER,
    flow_X,
    link_metric,
    trace_at_infinity,
    verify_homogeneity_bound,
)
from errors import DomainError, TraceError
from frequency import boundary_trace
from geometry import EndDescription, build_end, exact_cone
from logger.logging import setup_logger
from operators import separated
from solvers import (
    ExpressionProfile,
    PowerProfile,
    SeedBranch,
    asymptotic_seed,
    integrate_profile,
    radial_coefficients,
    solve_selfsimilar_profile,
)

setup_logger()

N = 3
CONE = exact_cone(N)
SPHERE_AREA = 4 * math.pi


def slow_branch(end, lam: float, degree: int, R: float = 10.0):
    """(L_0 + λ) 的慢分支，取自渐近级数"""
    ode = radial_coefficients(end, 0.0, lam, end.link.mode(degree).eigenvalue, "minus")
    return separated(end, asymptotic_seed(ode, SeedBranch.SLOW, R).profile(), degree, label=f"slow(λ={lam:g}, l={degree})")


def decaying_mode():
    """L⁺_0 − ½ 的 Gaussian 衰减分支"""
    ode = radial_coefficients(CONE, 0.0, -0.5, 0.0, "plus")
    return separated(CONE, integrate_profile(ode, asymptotic_seed(ode, "gaussian", 14.0), 6.0, rtol=1e-11), label="decaying")


def test_flow():
    """测试 Π_τ 把 S_ρ₀ 映到 S_{τρ₀}"""
    print("测试1: 精确锥 Π_τ(ρ₀) = τρ₀，且满足半群性质")
    result = flow_X(CONE, 3.0, 4.0)
    assert result.radius == 12.0 and not result.integrated, f"精确锥流应为闭式，实际 {result}"
    twice = flow_X(CONE, flow_X(CONE, 3.0, 2.0).radius, 2.0)
    assert abs(twice.radius - result.radius) <= 1e-10 * result.radius, "半群性质不成立"
    print("  ✅ 通过\n")

    print("测试2: 扩张子端 (|∇r| ≠ 1) 积分流满足 X·r = r")
    expander = solve_selfsimilar_profile("expander", N, slope=1.0)
    end = build_end(EndDescription(model="selfsimilar_end", n=N, r_inner=10.0, profile=expander))
    result = flow_X(end, 12.0, 4.0)
    print(f"  ρ(τ) = {result.radius:.12f}, 相对误差 {result.relative_error:.2e}, {result.steps} 步")
    assert result.integrated, "图端应积分流方程"
    assert result.relative_error < 1e-8, f"|ρ(τ) − τρ₀|/τρ₀ = {result.relative_error}"
    twice = flow_X(end, flow_X(end, 12.0, 2.0).radius, 2.0)
    assert abs(twice.radius - result.radius) <= 1e-9 * result.radius, "图端半群性质不成立"
    print("  ✅ 通过\n")

    print("测试3: τ < 1 或流出端时抛出 DomainError")
    for target, rho0, tau in ((CONE, 3.0, 0.5), (end, 12.0, 100.0)):
        try:
            flow_X(target, rho0, tau)
        except DomainError:
            pass
        else:
            raise AssertionError(f"ρ₀={rho0}, τ={tau} 应该抛出 DomainError")
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


def test_link_metric():
    """测试 g_L(τ) 与畸变常数"""
    print("测试1: 精确锥 g_L(τ) 不随 τ 变化")
    cone = link_metric(CONE)
    assert all(row.scale == 1.0 for row in cone.rows), "精确锥的尺度应恒为 1"
    assert cone.lam_dist == 0.0 and cone.decay_exponent is None and cone.passed, f"精确锥报告错误: {cone}"
    print("  ✅ 通过\n")

    print("测试2: h = r² + δ 时尺度 = 1 + δ/(τR_L)²，畸变以 τ^{-2} 衰减")
    delta = 0.1
    end = build_end(EndDescription(model="perturbed_cone", n=N, r_inner=10.0, delta=delta))
    cone = link_metric(end)
    R_L = cone.reference_radius
    for row in cone.rows:
        expected = 1 + delta / (row.tau * R_L) ** 2
        assert abs(row.scale - expected) < 1e-14, f"τ={row.tau}: 尺度 {row.scale}, 期望 {expected}"
    assert abs(cone.fitted_limit - 1.0) < 1e-10, f"极限尺度应为 1，实际 {cone.fitted_limit}"
    assert abs(cone.decay_exponent + 2.0) < 0.01, f"畸变指数应为 −2，实际 {cone.decay_exponent}"
    assert cone.fit_quality >= 0.99, f"log-log 拟合 R² 应 ≥ 0.99，实际 {cone.fit_quality}"
    print("  ✅ 通过\n")

    print("测试3: 拟合的 λ_dist 不超过由 Λ 认证的 λ_cert")
    print(f"  λ_dist = {cone.lam_dist:.6g}, λ_cert = {cone.lam_cert:.6g}")
    assert cone.lam_dist <= cone.lam_cert and cone.passed, "畸变常数超出认证界"
    for row in cone.rows:
        assert abs(math.log(row.scale)) <= cone.lam_dist / (2 * row.tau**2) * (1 + 1e-12), f"τ={row.tau} 处畸变界不成立"
    print("  ✅ 通过\n")

    print("测试4: 收敛报告的 CSV 表头")
    with tempfile.TemporaryDirectory() as tmp:
        path = cone.export_csv(Path(tmp) / "link.csv")
        with open(path, encoding="utf-8") as f:
            rows = list(csv.reader(f))
    assert rows[0] == CONVERGENCE_CSV_HEADER, f"表头错误: {rows[0]}"
    assert len(rows) == len(cone.rows) + 1, "行数错误"
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


def test_trace_at_infinity():
    """测试无穷远迹与次数一致性"""
    print("测试1: λ = 0 慢分支 (f → 1) 的 0 次迹为 a，α² = ‖a‖²")
    mode = slow_branch(CONE, 0.0, 1)
    trace = trace_at_infinity(mode, 0.0)
    print(f"  系数 {trace.coefficient:.12f}, 速率 {trace.rate:.3f}")
    assert abs(trace.coefficient - 1.0) < 1e-8, f"迹系数应为 1，实际 {trace.coefficient}"
    assert abs(trace.alpha_sq - SPHERE_AREA) < 1e-7 * SPHERE_AREA, f"α² 应为 4π，实际 {trace.alpha_sq}"
    assert abs(trace.rate + 2.0) < 0.05, f"回拉收敛速率应约为 R^-2，实际 {trace.rate}"
    print("  ✅ 通过\n")

    print("测试2: 与频率模块的 α² 在 1% 内一致")
    frequency_alpha = boundary_trace(mode, 0.0).alpha_sq
    assert abs(trace.alpha_sq / frequency_alpha - 1) < 0.01, f"α²: {trace.alpha_sq} vs {frequency_alpha}"
    print("  ✅ 通过\n")

    print("测试3: Gaussian 衰减分支的 0 次迹为零")
    trace = trace_at_infinity(decaying_mode(), 0.0)
    assert trace.vanishes and trace.alpha_sq == 0.0, f"衰减分支迹应为 0，实际 {trace.coefficient}"
    print("  ✅ 通过\n")

    print("测试4: λ = ½ 慢分支：d = 1 非零，d = 2 为零，d = 0 不收敛")
    half = slow_branch(CONE, 0.5, 0)
    first = trace_at_infinity(half, 1.0)
    assert abs(first.coefficient - 1.0) < 1e-8 and abs(first.measured_degree - 1.0) < 0.01, f"1 次迹错误: {first}"
    assert trace_at_infinity(half, 2.0).vanishes, "d = 2 的迹应为 0"
    try:
        trace_at_infinity(half, 0.0)
    except TraceError:
        pass
    else:
        raise AssertionError("d < 2λ 应该抛出 TraceError")
    print("  ✅ 通过\n")

    print("测试5: 主项 F = r 的迹等于自身，缺口为零")
    leading = separated(CONE, PowerProfile(1.0, first.coefficient))
    again = trace_at_infinity(leading, 1.0)
    assert again.coefficient == first.coefficient and again.rate is None, f"幂等性不成立: {again}"
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


def test_homogeneity_bound():
    """测试 ∫_{E_R} r^{-n}|F − G|² ≤ 16α̃²R^{-2}"""
    print("测试1: u = a 时 F = G，左端为 0")
    exact = verify_homogeneity_bound(separated(CONE, ExpressionProfile.constant(1.0), 1))
    assert exact.passed and all(p.lhs == 0.0 for p in exact.points), f"齐次函数左端应为 0: {exact.points}"
    print("  ✅ 通过\n")

    print("测试2: μ_link = 2 慢分支在 R ∈ {10, 20, 40} 上界成立，常数远小于 16")
    bound = verify_homogeneity_bound(slow_branch(CONE, 0.0, 1))
    print(f"  α̃² = {bound.alpha_tilde_sq:.6f}, 常数 {bound.measured_constant:.4g}")
    assert bound.passed, f"齐次性界不成立: {bound.points}"
    assert bound.measured_constant < 0.1, f"测得常数应远小于 16，实际 {bound.measured_constant}"
    print("  ✅ 通过\n")

    print("测试3: 扰动锥上同一模式仍满足上界")
    end = build_end(EndDescription(model="perturbed_cone", n=N, r_inner=8.0, delta=0.1))
    ode = radial_coefficients(end, 0.0, 0.0, end.link.mode(1).eigenvalue, "minus")
    profile = integrate_profile(ode, asymptotic_seed(ode, SeedBranch.SLOW, 100.0), 9.0)
    bound = verify_homogeneity_bound(separated(end, profile, 1, label="perturbed-mode"))
    print(f"  常数 {bound.measured_constant:.4g}")
    assert bound.passed and bound.measured_constant < 1.0, f"扰动锥上界不成立: {bound.points}"
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


if __name__ == "__main__":
    test_flow()
    test_link_metric()
    test_trace_at_infinity()
    test_homogeneity_bound()
