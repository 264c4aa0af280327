// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;
use stitchsim_core::kinematics::*;

fn closed_joint_states(ctrl_wrist: bool, ctrl_elbow: bool) -> SensorStates {
    SensorStates::default().with_closed(Joint::CtrlWrist, ctrl_wrist).with_closed(Joint::CtrlElbow, ctrl_elbow)
}

#[test]
fn both_control_sensors_is_invalid_not_a_winner() {
    assert_eq!(derive_control_selection(&closed_joint_states(false, false)), Selection::None);
    assert_eq!(derive_control_selection(&closed_joint_states(true, false)), Selection::Circuit1);
    assert_eq!(derive_control_selection(&closed_joint_states(false, true)), Selection::Circuit2);
    assert_eq!(derive_control_selection(&closed_joint_states(true, true)), Selection::InvalidBoth);
}

#[test]
fn rest_pose_is_the_calibration_state() {
    let s = evaluate_sensors(&JointPose::rest(0), &SensorStates::default(), &SensorSpecs::default()).unwrap();
    assert_eq!(derive_control_selection(&s), Selection::None);
    for sel in [Selection::Circuit1, Selection::Circuit2] {
        assert_eq!(derive_exercise_inputs(&s, sel).unwrap(), (false, false));
    }
    assert!(validate_pose(&JointPose::rest(0), &RomSpec::default()).is_empty());
}

fn joint() -> impl Strategy<Value = Joint> {
    prop::sample::select(Joint::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn constant_angle_never_toggles(j in joint(), angle in -30.0f64..160.0, was in any::<bool>(), steps in 1usize..20) {
        let specs = SensorSpecs::default();
        let pose = JointPose::rest(0).with_angle(j, angle);
        let mut s = evaluate_sensors(&pose, &SensorStates::default().with_closed(j, was), &specs).unwrap();
        let settled = s;
        for _ in 0..steps {
            s = evaluate_sensors(&pose, &s, &specs).unwrap();
            prop_assert_eq!(s, settled);
        }
    }

    #[test]
    fn band_holds_previous_state(j in joint(), frac in 0.0f64..1.0, was in any::<bool>()) {
        let specs = SensorSpecs::default();
        let spec = specs.get(j).unwrap();
        // Strictly inside the hysteresis band the state is remembered.
        let angle = spec.theta_on - spec.hysteresis + 1e-6 + frac * (spec.hysteresis - 2e-6);
        let prev = SensorStates::default().with_closed(j, was);
        let s = evaluate_sensors(&JointPose::rest(0).with_angle(j, angle), &prev, &specs).unwrap();
        prop_assert_eq!(s.is_closed(j), was);
    }

    #[test]
    fn replay_is_identical(angles in prop::collection::vec(prop::array::uniform6(-20.0f64..150.0), 1..60)) {
        let specs = SensorSpecs::default();
        let run = || {
            let mut s = SensorStates::default();
            angles
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    s = evaluate_sensors(&JointPose::new(i as u64 * 10, *a, false).unwrap(), &s, &specs).unwrap();
                    s
                })
                .collect::<Vec<_>>()
        };
        prop_assert_eq!(run(), run());
    }
}
