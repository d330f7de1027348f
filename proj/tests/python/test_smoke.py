import math

try:
    import pingpong as pp
except ImportError:
    import _pingpong as pp


def test_transform_table():
    # sigma_y swaps 0<->3 and 1<->2
    assert pp.transform(0, 2) == 3
    assert pp.transform(1, 2) == 2
    for a in range(4):
        for b in range(4):
            f = pp.transform(a, b)
            assert pp.decode_message(f, b) == a
            assert pp.infer_operation(a, f) == b


def test_bell_state_amplitudes():
    amps = pp.bell_state_amplitudes(0)
    s = 1 / math.sqrt(2)
    assert abs(amps[0] - s) < 1e-12
    assert abs(amps[1]) < 1e-12
    assert abs(amps[2]) < 1e-12
    assert abs(amps[3] - s) < 1e-12


def test_expected_correlation():
    assert pp.expected_correlation(0, 0) == "correlated"
    assert pp.expected_correlation(1, 1) == "anticorrelated"
    assert pp.expected_correlation(1, 1, rule="paper-literal") == "correlated"


def test_honest_session_decodes():
    message = [0, 1, 2, 3] * 5
    result = pp.run_session(message, lambda_c=0.3, attack="none", seed=11)
    assert not result["detected"]
    assert result["bob_decoded"] == message


def test_weak_mitm_invisible_without_control():
    message = [3, 1, 0, 2] * 10
    result = pp.run_session(message, lambda_c=0.0, attack="weak-mitm", seed=5)
    assert not result["detected"]
    assert result["bob_decoded"] == message
    assert result["eve_a_recovery_accuracy"] == 1.0


def test_intercept_resend_detection_rate():
    stats = pp.run_experiment(
        trials=3000, n_messages=20, lambda_c=0.5, attack="intercept-resend", seed=7, workers=2
    )
    assert stats["control_rounds_total"] > 1000
    assert abs(stats["detection_rate_per_control"] - 0.25) < 0.03


def test_experiment_determinism():
    kwargs = dict(trials=500, n_messages=10, lambda_c=0.3, attack="none", seed=99)
    a = pp.run_experiment(workers=1, **kwargs)
    b = pp.run_experiment(workers=4, **kwargs)
    assert a["rq"] == b["rq"] == 1.0
    assert a["mi_a_f"] == b["mi_a_f"]


def test_survival_curve():
    curve = pp.survival_curve("intercept-resend", max_controls=2, trials=2000, seed=3)
    assert curve[0] == (0, 1.0)
    assert abs(curve[1][1] - 0.75) < 0.05
    assert abs(curve[2][1] - 0.75**2) < 0.05
