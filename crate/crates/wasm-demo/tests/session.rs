use sktdpc_wasm::Session;

#[test]
fn default_session_clusters_and_plots() {
    let mut s = Session::default();
    assert_eq!(s.data().len(), 360);
    assert!(s.decision_graph_svg().is_err());
    let input = s.scatter_svg().unwrap();
    assert!(input.starts_with("<svg"));

    let summary = s.cluster(6).unwrap();
    assert_eq!(summary.n, 360);
    assert_eq!(summary.centers.len(), summary.clusters);
    assert!(summary.acc.is_some());
    assert!(summary.ratio > 0.0 && summary.ratio <= 1.0);
    assert!(s.decision_graph_svg().unwrap().contains("<circle"));
    assert!(s.gamma_svg(30).unwrap().contains("M = "));
}

#[test]
fn generate_validates_input() {
    let mut s = Session::default();
    assert!(s.generate(0, 10, 1.0, 1).is_err());
    assert!(s.generate(2, 0, 1.0, 1).is_err());
    assert!(s.generate(2, 10, -1.0, 1).is_err());
    s.generate(4, 50, 0.5, 3).unwrap();
    assert_eq!(s.data().len(), 200);
}

#[test]
fn pasted_points_with_and_without_labels() {
    let mut s = Session::default();
    s.load_text("0 0\n0 1\n1 0\n9 9\n9 8\n8 9\n").unwrap();
    assert!(s.data().labels().is_none());
    let summary = s.cluster(2).unwrap();
    assert_eq!(summary.acc, None);

    s.load_text("0,0,a\n0,1,a\n1,0,a\n9,9,b\n9,8,b\n8,9,b\n")
        .unwrap();
    assert_eq!(s.data().class_count(), Some(2));
    assert!(s.load_text("1,2,3,4\n").is_err());
    assert!(s.load_text("1,x\n").is_err());
    assert!(s.cluster(6).is_err());
}
