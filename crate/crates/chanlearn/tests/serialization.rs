use chanlearn::channels::{ChannelRep, ChannelTestOperator};
use chanlearn::combs::CombOperator;
use chanlearn::linalg::DensityOperator;
use chanlearn::serialization::{from_json, to_json, ChannelJson, CombJson, MatrixJson, TestOperatorJson};
use chanlearn::transcript::{digest, BoundCheck, Transcript};

const IDENTITY_CHOI: &str = "AAAAAAAA8D8AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA8D8AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA8D8AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA8D8AAAAAAAAAAA==";

/// `diag(1, 0, 0, 1)`, the Choi matrix of full dephasing.
const DEPHASING_CHOI: &str = "AAAAAAAA8D8AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA8D8AAAAAAAAAAA==";

#[test]
fn identity_channel_has_the_expected_encoding() {
    let j = ChannelJson::from(&ChannelRep::<f64>::identity(2));
    assert_eq!((j.d_in, j.d_out, j.choi.rows, j.choi.cols), (2, 2, 4, 4));
    assert_eq!(j.choi.data, IDENTITY_CHOI);
    let text = to_json(&j).unwrap();
    assert!(text.starts_with(r#"{"d_in":2,"d_out":2,"choi":{"rows":4,"cols":4,"data":"#));
}

#[test]
fn decoded_dephasing_channel_acts_as_dephasing() {
    let text = format!(r#"{{"d_in":2,"d_out":2,"choi":{{"rows":4,"cols":4,"data":"{DEPHASING_CHOI}"}}}}"#);
    let ch = ChannelRep::try_from(&from_json::<ChannelJson>(&text).unwrap()).unwrap();
    let plus = DensityOperator::pure(&[chanlearn::linalg::Cx::new(1.0, 0.0), chanlearn::linalg::Cx::new(1.0, 0.0)]);
    let out = ch.apply(&plus).unwrap();
    assert!(out.op().sub(DensityOperator::<f64>::maximally_mixed(2).op()).frobenius_norm() < 1e-12);
}

#[test]
fn invalid_operators_are_rejected_on_decode() {
    // only the |00><00| entry: not trace preserving
    let mut raw = vec![0u8; 16 * 16];
    raw[..8].copy_from_slice(&1.0f64.to_le_bytes());
    use base64::Engine;
    let data = base64::engine::general_purpose::STANDARD.encode(raw);
    let j = ChannelJson { d_in: 2, d_out: 2, choi: MatrixJson { rows: 4, cols: 4, data: data.clone() } };
    assert!(ChannelRep::try_from(&j).is_err());
    let comb = CombJson { in_dims: vec![2], out_dims: vec![2], op: MatrixJson { rows: 4, cols: 4, data } };
    assert!(CombOperator::try_from(&comb).is_err());
    let comb = CombJson { in_dims: vec![2], out_dims: vec![2], op: MatrixJson { rows: 4, cols: 4, data: IDENTITY_CHOI.into() } };
    assert!(CombOperator::try_from(&comb).is_ok());
}

#[test]
fn test_operator_keeps_its_certificate() {
    let e = ChannelTestOperator::product(&DensityOperator::basis(2, 1), DensityOperator::<f64>::basis(2, 0).op()).unwrap();
    let j = TestOperatorJson::from(&e);
    let cert = j.certificate.as_ref().unwrap();
    // |1><1| as (re, im) pairs
    let mut raw = vec![0u8; 64];
    raw[48..56].copy_from_slice(&1.0f64.to_le_bytes());
    use base64::Engine;
    assert_eq!(cert.data, base64::engine::general_purpose::STANDARD.encode(raw));
    let mut bad = j.clone();
    bad.certificate = None;
    bad.d_in = 3;
    assert!(ChannelTestOperator::try_from(&bad).is_err());
}

#[test]
fn digests_are_fnv1a_of_the_bits() {
    assert_eq!(digest(&[]), "cbf29ce484222325");
    assert_eq!(digest(&[1.0]), "aab1693229ba1db8");
    assert_eq!(digest(&[0.5, 0.25]), "27bee7d4e5a4cb95");
}

#[test]
fn transcript_json_names_failed_checks() {
    let mut tr = Transcript::default();
    tr.check("regret", 3.0, 2.5);
    let v: serde_json::Value = serde_json::from_str(&to_json(&tr).unwrap()).unwrap();
    assert_eq!(v["summary"]["checks"][0]["name"], "regret");
    assert_eq!(v["summary"]["checks"][0]["passed"], false);
    assert_eq!(BoundCheck::new("x", 1.0, 1.0).passed, true);
}
