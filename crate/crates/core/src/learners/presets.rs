use super::NetworkConfig;

/// Hidden units and epochs for the standard benchmark datasets.
const PRESETS: &[(&str, usize, usize)] = &[
    ("breast-cancer-w", 5, 20),
    ("credit-a", 10, 35),
    ("credit-g", 10, 30),
    ("diabetes", 5, 30),
    ("glass", 10, 80),
    ("heart-cleveland", 5, 40),
    ("hepatitis", 10, 60),
    ("house-votes-84", 5, 40),
    ("hypo", 15, 40),
    ("ionosphere", 10, 40),
    ("iris", 5, 80),
    ("kr-vs-kp", 15, 20),
    ("labor", 10, 80),
    ("letter", 40, 30),
    ("promoters-936", 20, 30),
    ("ribosome-bind", 20, 35),
    ("satellite", 15, 30),
    ("segmentation", 15, 20),
    ("sick", 10, 40),
    ("sonar", 10, 60),
    ("soybean", 25, 40),
    ("splice", 25, 30),
    ("vehicle", 10, 40),
];

/// Network topology and training length for a dataset.
///
/// Named benchmark datasets use their fixed preset. Anything else gets
/// `max(5, outputs, ceil(inputs / 10))` hidden units and 70, 40 or 30 epochs
/// for fewer than 250, 250 to 500, or more examples.
pub fn lookup_network_config(dataset: &str, n_inputs: usize, n_outputs: usize, n_examples: usize) -> NetworkConfig {
    if let Some(&(_, hidden, epochs)) = PRESETS.iter().find(|(name, _, _)| *name == dataset) {
        return NetworkConfig::new(hidden, epochs);
    }
    let hidden = 5.max(n_outputs).max(n_inputs.div_ceil(10));
    let epochs = match n_examples {
        0..250 => 70,
        250..=500 => 40,
        _ => 30,
    };
    NetworkConfig::new(hidden, epochs)
}

/// Names with a fixed preset.
pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|p| p.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_and_fallback() {
        let c = lookup_network_config("breast-cancer-w", 9, 1, 699);
        assert_eq!((c.hidden_units, c.epochs), (5, 20));
        let c = lookup_network_config("letter", 16, 26, 20000);
        assert_eq!((c.hidden_units, c.epochs), (40, 30));
        let c = lookup_network_config("mystery", 120, 3, 100);
        assert_eq!((c.hidden_units, c.epochs), (12, 70));
        let c = lookup_network_config("mystery", 4, 7, 250);
        assert_eq!((c.hidden_units, c.epochs), (7, 40));
        let c = lookup_network_config("mystery", 4, 1, 501);
        assert_eq!((c.hidden_units, c.epochs), (5, 30));
        assert_eq!(preset_names().count(), 23);
        assert_eq!(c.learning_rate, 0.15);
        assert_eq!(c.momentum, 0.9);
    }
}
