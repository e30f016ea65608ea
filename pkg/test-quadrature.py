"""测试权函数与加权径向积分"""

import math

import numpy as np

from errors import DomainError
from logger.logging import setup_logger
from quadrature import (
    WeightSpec,
    check_parts_identity,
    eval_weight,
    integrate_radial,
    log_phi,
    tail_ratio,
)

setup_logger()


def test_eval_weight():
    """测试 eval_weight 的闭式值与溢出处理"""
    print("测试1: 闭式权值")
    value, log_value = eval_weight(WeightSpec.gaussian(0), 2.0)
    assert abs(value - math.exp(-1)) < 1e-15, f"Φ_0(2) 应为 e^-1，实际 {value}"
    value, _ = eval_weight(WeightSpec.inverse_gaussian(2), 2.0)
    assert abs(value - 4 * math.e) < 1e-12, f"Ψ_2(2) 应为 4e，实际 {value}"
    value, _ = eval_weight(WeightSpec.gaussian(-3), 10.0)
    assert abs(value / (1e-3 * math.exp(-25)) - 1) < 1e-13, f"Φ_-3(10) 错误: {value}"
    print("  ✅ 通过\n")

    print("测试2: 大半径下对数值有限、直接值平滑溢出")
    value, log_value = eval_weight(WeightSpec.gaussian(4), 9000.0)
    assert value == 0.0 and math.isfinite(log_value), f"Φ_4(9000) 应下溢为 0，log 有限: {value}, {log_value}"
    value, log_value = eval_weight(WeightSpec.inverse_gaussian(0), 9000.0)
    assert value == math.inf and math.isfinite(log_value), f"Ψ_0(9000) 应上溢为 inf: {value}"
    print("  ✅ 通过\n")

    print("测试3: t ≤ 0 抛出 DomainError")
    for t in (0.0, -1.0):
        try:
            eval_weight(WeightSpec.gaussian(1), t)
        except DomainError:
            continue
        raise AssertionError(f"t={t} 应该抛出 DomainError")
    print("  ✅ 通过\n")

    print("测试4: 单调性")
    for m in (-2.0, 0.0, 1.0, 3.0):
        start = math.sqrt(2 * m) if m > 0 else 0.0
        t = np.linspace(start + 1e-3, 30.0, 400)
        logs = WeightSpec.gaussian(m).log_values(t)
        assert np.all(np.diff(logs) < 0), f"Φ_{m} 在 t > √(2m) 上应严格递减"
    print("  ✅ 通过\n")


def test_integrate_radial():
    """测试 integrate_radial 的闭式积分"""
    one = lambda t: 1.0

    print("测试1: ∫_0^∞ Φ_1 = 2, ∫_0^∞ Φ_0 = √π")
    result = integrate_radial(one, WeightSpec.gaussian(1), 0.0)
    assert abs(result.value - 2.0) < 1e-10, f"∫Φ_1 应为 2，实际 {result.value}"
    assert result.truncated_at is not None, "无穷高斯积分应该记录截断半径"
    result = integrate_radial(one, WeightSpec.gaussian(0), 0.0)
    assert abs(result.value - math.sqrt(math.pi)) < 1e-10, f"∫Φ_0 应为 √π，实际 {result.value}"
    print("  ✅ 通过\n")

    print("测试2: ∫_2^∞ Φ_3 = 16/e")
    result = integrate_radial(one, WeightSpec.gaussian(3), 2.0)
    assert abs(result.value - 16 / math.e) < 1e-9, f"实际 {result.value}"
    print("  ✅ 通过\n")

    print("测试3: ∫_2^3 Φ_1 = 2Φ_0(2) − 2Φ_0(3)")
    result = integrate_radial(one, WeightSpec.gaussian(1), 2.0, 3.0)
    expected = 2 * math.exp(-1) - 2 * math.exp(-9 / 4)
    assert abs(result.value / expected - 1) < 1e-10, f"实际 {result.value}，期望 {expected}"
    print("  ✅ 通过\n")

    print("测试4: 大半径下对数尺度保持比例（ρ = 60）")
    result = integrate_radial(one, WeightSpec.gaussian(2), 60.0)
    ratio = result.relative_to(log_phi(2, 60.0)) * 60.0 / 2.0
    assert result.value == 0.0 or result.value < 1e-300, "直接值应下溢"
    assert abs(ratio - 1) < 3 / 60.0**2, f"尾部比例应接近 1，实际 {ratio}"
    print("  ✅ 通过\n")

    print("测试5: 幂权无穷积分 ∫_1^∞ t^-3 = 1/2")
    result = integrate_radial(one, WeightSpec.power(-3), 1.0)
    assert abs(result.value - 0.5) < 1e-10, f"实际 {result.value}"
    print("  ✅ 通过\n")

    print("测试6: 逆高斯权无穷积分发散")
    try:
        integrate_radial(one, WeightSpec.inverse_gaussian(0), 1.0)
    except DomainError:
        print("  ✅ 通过\n")
    else:
        raise AssertionError("应该抛出 DomainError")

    print("测试7: 被积函数为相消残差时，容差取自相消项的量级")
    residual = lambda t: (t + 1.0 / 3.0) ** 2 - t * t - 2.0 * t / 3.0 - 1.0 / 9.0
    size = lambda t: (t + 1.0 / 3.0) ** 2 + t * t + 2.0 * t / 3.0 + 1.0 / 9.0
    result = integrate_radial(residual, WeightSpec.gaussian(3), 10.0, scale=size)
    reference = integrate_radial(size, WeightSpec.gaussian(3), 10.0)
    assert abs(result.relative_to(reference.log_scale)) < 1e-8 * reference.scaled, f"残差积分应接近 0: {result}"
    print("  ✅ 通过\n")


def test_parts_identity():
    """测试分部积分恒等式与尾部估计"""
    print("测试1: 示例 (m, ρ) ∈ {(1, 2), (3, 2), (0, 5)}")
    for m, rho in ((1, 2.0), (3, 2.0), (0, 5.0)):
        check = check_parts_identity(m, rho)
        print(f"  m={m}, ρ={rho}: residual={check.residual:.2e}, O-constant={check.o_constant:.4f}")
        assert check.residual < 1e-10, f"残差过大: {check.residual}"
    print("  ✅ 通过\n")

    print("测试2: m ∈ {-3..5} × ρ ∈ {1, 2, 5, 10, 20} 相对残差 < 1e-8")
    worst = 0.0
    for m in range(-3, 6):
        for rho in (1.0, 2.0, 5.0, 10.0, 20.0):
            check = check_parts_identity(m, rho)
            worst = max(worst, check.relative_residual)
    print(f"  最大相对残差: {worst:.2e}")
    assert worst < 1e-8, f"最大相对残差 {worst} 超出 1e-8"
    print("  ✅ 通过\n")

    print("测试3: ∫_ρ^∞Φ_m / (2ρ^-1 Φ_m(ρ)) ∈ [1 − 10/ρ², 1 + 10/ρ²]")
    for m in (-2, 0, 3):
        for rho in (10.0, 20.0):
            ratio = tail_ratio(m, rho)
            assert abs(ratio - 1) <= 10 / rho**2, f"m={m}, ρ={rho}: ratio={ratio}"
    print("  ✅ 通过\n")

    print("测试4: ρ < 1 抛出 DomainError")
    try:
        check_parts_identity(1, 0.5)
    except DomainError:
        print("  ✅ 通过\n")
    else:
        raise AssertionError("应该抛出 DomainError")

    print("所有测试通过！✅")


if __name__ == "__main__":
    test_eval_weight()
    test_integrate_radial()
    test_parts_identity()
