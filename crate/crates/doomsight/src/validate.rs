//! Structural checks on a Coco instances file, independent of how it was
//! produced.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{Map, Value};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DatasetStats {
    pub images: usize,
    pub annotations: usize,
    pub categories: usize,
    /// Category name to the number of distinct images it annotates.
    pub category_images: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub stats: DatasetStats,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

fn uint(v: Option<&Value>) -> Option<u64> {
    v.and_then(Value::as_u64)
}

fn array<'a>(root: &'a Map<String, Value>, key: &str, errors: &mut Vec<String>) -> &'a [Value] {
    match root.get(key) {
        Some(Value::Array(a)) => a,
        Some(_) => {
            errors.push(format!("\"{key}\" is not an array"));
            &[]
        }
        None => {
            errors.push(format!("missing \"{key}\""));
            &[]
        }
    }
}

/// Parses and checks a dataset. Problems, including malformed JSON, are
/// reported rather than returned as errors.
pub fn validate_dataset(bytes: &[u8]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let root = match serde_json::from_slice::<Value>(bytes) {
        Ok(Value::Object(m)) => m,
        Ok(_) => {
            report.errors.push("top level is not an object".into());
            return report;
        }
        Err(e) => {
            report.errors.push(format!("parse error: {e}"));
            return report;
        }
    };
    let errors = &mut report.errors;
    if !matches!(root.get("info"), Some(Value::Object(_))) {
        errors.push("missing or non-object \"info\"".into());
    }
    if !matches!(root.get("licenses"), Some(Value::Array(_))) {
        errors.push("missing or non-array \"licenses\"".into());
    }
    let images = array(&root, "images", errors);
    let annotations = array(&root, "annotations", errors);
    let categories = array(&root, "categories", errors);

    let mut image_dims: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
    for (i, img) in images.iter().enumerate() {
        let Some(id) = uint(img.get("id")) else {
            errors.push(format!("images[{i}]: missing integer id"));
            continue;
        };
        let (w, h) = (uint(img.get("width")), uint(img.get("height")));
        let (Some(w), Some(h)) = (w.filter(|&w| w > 0), h.filter(|&h| h > 0)) else {
            errors.push(format!(
                "image {id}: width and height must be positive integers"
            ));
            continue;
        };
        if !img
            .get("file_name")
            .and_then(Value::as_str)
            .is_some_and(|s| !s.is_empty())
        {
            errors.push(format!("image {id}: missing file_name"));
        }
        if image_dims.insert(id, (w, h)).is_some() {
            errors.push(format!("image id {id} is not unique"));
        }
    }

    let mut category_names: BTreeMap<u64, String> = BTreeMap::new();
    let mut names = BTreeSet::new();
    for (i, c) in categories.iter().enumerate() {
        let Some(id) = uint(c.get("id")) else {
            errors.push(format!("categories[{i}]: missing integer id"));
            continue;
        };
        let Some(name) = c.get("name").and_then(Value::as_str) else {
            errors.push(format!("category {id}: missing name"));
            continue;
        };
        if c.get("supercategory").and_then(Value::as_str).is_none() {
            errors.push(format!("category {id}: missing supercategory"));
        }
        if !names.insert(name.to_string()) {
            errors.push(format!("category name {name} is not unique"));
        }
        if category_names.insert(id, name.to_string()).is_some() {
            errors.push(format!("category id {id} is not unique"));
        }
    }

    let mut ann_ids = BTreeSet::new();
    let mut category_images: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for (i, a) in annotations.iter().enumerate() {
        let Some(id) = uint(a.get("id")) else {
            errors.push(format!("annotations[{i}]: missing integer id"));
            continue;
        };
        if !ann_ids.insert(id) {
            errors.push(format!("annotation id {id} is not unique"));
        }
        let image_id = uint(a.get("image_id"));
        let dims = image_id.and_then(|im| image_dims.get(&im).copied());
        if dims.is_none() {
            errors.push(format!(
                "annotation {id}: image_id {} not found",
                a.get("image_id").unwrap_or(&Value::Null)
            ));
        }
        let category_id = uint(a.get("category_id"));
        match category_id {
            Some(c) if category_names.contains_key(&c) => {
                if let Some(im) = image_id {
                    category_images.entry(c).or_default().insert(im);
                }
            }
            _ => errors.push(format!(
                "annotation {id}: category_id {} not found",
                a.get("category_id").unwrap_or(&Value::Null)
            )),
        }
        match a.get("area").and_then(Value::as_f64) {
            Some(area) if area > 0.0 && area.is_finite() => {}
            _ => errors.push(format!("annotation {id}: area must be a positive number")),
        }
        if !matches!(a.get("iscrowd").and_then(Value::as_u64), Some(0 | 1)) {
            errors.push(format!("annotation {id}: iscrowd must be 0 or 1"));
        }

        let bbox: Option<Vec<f64>> = a
            .get("bbox")
            .and_then(Value::as_array)
            .and_then(|b| b.iter().map(Value::as_f64).collect());
        match bbox.as_deref() {
            Some(&[x, y, w, h]) => {
                if !(x >= 0.0 && y >= 0.0 && w > 0.0 && h > 0.0) {
                    errors.push(format!("annotation {id}: degenerate bbox"));
                } else if let Some((iw, ih)) = dims {
                    if x + w > iw as f64 || y + h > ih as f64 {
                        errors.push(format!("annotation {id}: bbox extends past its image"));
                    }
                }
            }
            _ => errors.push(format!("annotation {id}: bbox must be four numbers")),
        }

        match a.get("segmentation").and_then(Value::as_array) {
            Some(rings) if !rings.is_empty() => {
                for (k, ring) in rings.iter().enumerate() {
                    let coords: Option<Vec<f64>> = ring
                        .as_array()
                        .and_then(|r| r.iter().map(Value::as_f64).collect());
                    match coords {
                        Some(c) if c.len() % 2 == 0 && c.len() >= 6 => {
                            if let Some((iw, ih)) = dims {
                                let inside = c.chunks_exact(2).all(|p| {
                                    (0.0..=iw as f64).contains(&p[0]) && (0.0..=ih as f64).contains(&p[1])
                                });
                                if !inside {
                                    errors.push(format!("annotation {id}: ring {k} leaves its image"));
                                }
                            }
                        }
                        _ => errors.push(format!(
                            "annotation {id}: ring {k} needs an even number (at least 6) of coordinates"
                        )),
                    }
                }
            }
            _ => errors.push(format!(
                "annotation {id}: segmentation must be a non-empty list of polygons"
            )),
        }
    }

    report.stats = DatasetStats {
        images: images.len(),
        annotations: annotations.len(),
        categories: categories.len(),
        category_images: category_names
            .iter()
            .map(|(id, name)| {
                (
                    name.clone(),
                    category_images.get(id).map_or(0, BTreeSet::len),
                )
            })
            .collect(),
    };
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Value {
        json!({
            "info": {"description": "t", "version": "1.0"},
            "licenses": [],
            "images": [{"id": 1, "width": 64, "height": 32, "file_name": "s/rgb/000000.png"}],
            "annotations": [{
                "id": 1, "image_id": 1, "category_id": 1, "iscrowd": 0, "area": 36.0,
                "bbox": [2.0, 3.0, 6.0, 6.0],
                "segmentation": [[2.0, 3.0, 8.0, 3.0, 8.0, 9.0, 2.0, 9.0]]
            }],
            "categories": [{"id": 1, "name": "imp", "supercategory": "doom"}]
        })
    }

    fn check(v: &Value) -> ValidationReport {
        validate_dataset(&serde_json::to_vec(v).unwrap())
    }

    #[test]
    fn valid_sample() {
        let r = check(&sample());
        assert_eq!(r.errors, Vec::<String>::new());
        assert_eq!(r.stats.images, 1);
        assert_eq!(r.stats.category_images["imp"], 1);
    }

    #[test]
    fn dangling_image_id() {
        let mut v = sample();
        v["annotations"][0]["image_id"] = json!(999);
        let r = check(&v);
        assert_eq!(r.errors.len(), 1, "{:?}", r.errors);
        assert!(r.errors[0].contains("image_id 999"));
    }

    #[test]
    fn bbox_past_width() {
        let mut v = sample();
        v["annotations"][0]["bbox"] = json!([60.0, 3.0, 6.0, 6.0]);
        assert_eq!(check(&v).errors.len(), 1);
    }

    #[test]
    fn odd_ring_and_duplicate_ids() {
        let mut v = sample();
        v["annotations"][0]["segmentation"] = json!([[1.0, 2.0, 3.0, 4.0, 5.0]]);
        let dup = v["annotations"][0].clone();
        v["annotations"].as_array_mut().unwrap().push(dup);
        let r = check(&v);
        assert!(r.errors.iter().any(|e| e.contains("not unique")));
        assert!(r.errors.iter().any(|e| e.contains("ring 0")));
    }

    #[test]
    fn malformed_json() {
        let r = validate_dataset(b"{\"images\": [");
        assert_eq!(r.errors.len(), 1);
        assert!(r.errors[0].starts_with("parse error"));
    }
}
