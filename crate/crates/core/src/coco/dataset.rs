use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::rules::{assign_split, filter_small, Split};
use super::{trace_polygons, CocoError, ExportConfig, InstanceObservation, SUPERCATEGORY};

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Info {
    pub description: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct License {
    pub id: u64,
    pub name: String,
    pub url: String,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Image {
    pub id: u64,
    pub width: u32,
    pub height: u32,
    pub file_name: String,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Annotation {
    pub id: u64,
    pub image_id: u64,
    pub category_id: u64,
    pub segmentation: Vec<Vec<f64>>,
    pub area: f64,
    pub bbox: [f64; 4],
    pub iscrowd: u8,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Category {
    pub id: u64,
    pub name: String,
    pub supercategory: String,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CocoDataset {
    pub info: Info,
    pub licenses: Vec<License>,
    pub images: Vec<Image>,
    pub annotations: Vec<Annotation>,
    pub categories: Vec<Category>,
}

impl CocoDataset {
    pub fn empty(split: Split) -> CocoDataset {
        CocoDataset {
            info: Info {
                description: alloc::format!("doomsight object instances ({})", split.name()),
                version: "1.0".to_string(),
            },
            licenses: Vec::new(),
            images: Vec::new(),
            annotations: Vec::new(),
            categories: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitDatasets {
    pub train: CocoDataset,
    pub val: CocoDataset,
    pub test: CocoDataset,
}

impl SplitDatasets {
    pub fn get(&self, split: Split) -> &CocoDataset {
        match split {
            Split::Train => &self.train,
            Split::Val => &self.val,
            Split::Test => &self.test,
        }
    }

    pub fn get_mut(&mut self, split: Split) -> &mut CocoDataset {
        match split {
            Split::Train => &mut self.train,
            Split::Val => &mut self.val,
            Split::Test => &mut self.test,
        }
    }
}

/// One rendered frame and its extracted instances.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameAnnotations {
    pub run: u32,
    pub map: String,
    pub tic: u32,
    pub file_name: String,
    pub width: u32,
    pub height: u32,
    pub instances: Vec<InstanceObservation>,
}

impl super::FrameKey for FrameAnnotations {
    fn run(&self) -> u32 {
        self.run
    }
    fn map(&self) -> &str {
        &self.map
    }
    fn tic(&self) -> u32 {
        self.tic
    }
}

/// Builds the three split datasets from already subsampled frames.
///
/// Image and annotation ids are 1-based and global across splits, in
/// (run, map, tic, instance id) order. Categories are numbered by name and
/// then pruned with [`filter_categories`].
pub fn assemble(
    mut frames: Vec<FrameAnnotations>,
    cfg: &ExportConfig,
) -> Result<SplitDatasets, CocoError> {
    frames.sort_by(|a, b| (a.run, &a.map, a.tic).cmp(&(b.run, &b.map, b.tic)));
    let mut out = SplitDatasets {
        train: CocoDataset::empty(Split::Train),
        val: CocoDataset::empty(Split::Val),
        test: CocoDataset::empty(Split::Test),
    };
    let mut splits = Vec::with_capacity(frames.len());
    for f in &mut frames {
        splits.push(assign_split(cfg.split, f.run, &f.map, &cfg.episodes)?);
        let mut inst = filter_small(core::mem::take(&mut f.instances), cfg.min_area);
        inst.sort_by_key(|o| o.instance_id);
        f.instances = inst;
    }

    let names: BTreeSet<&str> = frames
        .iter()
        .flat_map(|f| f.instances.iter().map(|o| o.category.as_str()))
        .collect();
    let ids: BTreeMap<&str, u64> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (*n, i as u64 + 1))
        .collect();
    let categories: Vec<Category> = ids
        .iter()
        .map(|(n, &id)| Category {
            id,
            name: n.to_string(),
            supercategory: SUPERCATEGORY.to_string(),
        })
        .collect();

    let mut ann_id = 0u64;
    for (i, (f, split)) in frames.iter().zip(splits).enumerate() {
        let image_id = i as u64 + 1;
        let ds = out.get_mut(split);
        ds.images.push(Image {
            id: image_id,
            width: f.width,
            height: f.height,
            file_name: f.file_name.clone(),
        });
        for o in &f.instances {
            ann_id += 1;
            ds.annotations.push(Annotation {
                id: ann_id,
                image_id,
                category_id: ids[o.category.as_str()],
                segmentation: trace_polygons(&o.mask),
                area: o.area as f64,
                bbox: o.bbox.map(|v| v as f64),
                iscrowd: 0,
            });
        }
    }
    for s in Split::ALL {
        out.get_mut(s).categories = categories.clone();
    }
    Ok(filter_categories(out, cfg.min_category_images))
}

/// Removes categories that annotate fewer than `min_images` distinct
/// training images, from every split, then renumbers the survivors 1..K
/// in name order. Images are kept even if left without annotations.
pub fn filter_categories(mut sets: SplitDatasets, min_images: usize) -> SplitDatasets {
    let mut seen: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for a in &sets.train.annotations {
        seen.entry(a.category_id).or_default().insert(a.image_id);
    }
    let mut kept: Vec<&Category> = sets
        .train
        .categories
        .iter()
        .filter(|c| seen.get(&c.id).map_or(0, BTreeSet::len) >= min_images)
        .collect();
    kept.sort_by(|a, b| a.name.cmp(&b.name));
    let remap: BTreeMap<u64, u64> = kept
        .iter()
        .enumerate()
        .map(|(i, c)| (c.id, i as u64 + 1))
        .collect();
    let categories: Vec<Category> = kept
        .iter()
        .map(|c| Category {
            id: remap[&c.id],
            name: c.name.clone(),
            supercategory: c.supercategory.clone(),
        })
        .collect();

    for s in Split::ALL {
        let ds = sets.get_mut(s);
        ds.annotations
            .retain(|a| remap.contains_key(&a.category_id));
        for a in &mut ds.annotations {
            a.category_id = remap[&a.category_id];
        }
        ds.categories = categories.clone();
    }
    sets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coco::{EpisodeMap, Mask, SplitMode};
    use alloc::vec;
    use proptest::prelude::*;

    fn blob(id: u32, cat: &str, x0: u32, w: u32, h: u32) -> InstanceObservation {
        let px: Vec<(u32, u32)> = (0..h)
            .flat_map(|y| (0..w).map(move |x| (x0 + x, y)))
            .collect();
        let mask = Mask::from_pixels(&px);
        InstanceObservation {
            instance_id: id,
            category: cat.into(),
            area: mask.count(),
            bbox: [x0, 0, w, h],
            mask,
        }
    }

    fn frame(run: u32, map: &str, tic: u32, inst: Vec<InstanceObservation>) -> FrameAnnotations {
        FrameAnnotations {
            run,
            map: map.into(),
            tic,
            file_name: alloc::format!("r{run}/{map}/{tic:06}.png"),
            width: 64,
            height: 32,
            instances: inst,
        }
    }

    fn cfg(min_images: usize) -> ExportConfig {
        ExportConfig {
            min_area: 30,
            frame_stride: 1,
            min_category_images: min_images,
            split: SplitMode::Run,
            episodes: EpisodeMap::default(),
            category_table: None,
        }
    }

    #[test]
    fn ids_are_global_and_ordered() {
        let frames = vec![
            frame(2, "MAP01", 0, vec![blob(1, "imp", 0, 6, 6)]),
            frame(
                1,
                "MAP01",
                5,
                vec![blob(4, "imp", 0, 6, 6), blob(2, "barrel", 10, 6, 6)],
            ),
            frame(1, "MAP01", 0, vec![blob(0, "barrel", 0, 2, 2)]),
        ];
        let sets = assemble(frames, &cfg(1)).unwrap();
        assert_eq!(
            sets.train.images.iter().map(|i| i.id).collect::<Vec<_>>(),
            [1, 2]
        );
        assert_eq!(sets.val.images[0].id, 3);
        // The 4-pixel barrel is dropped; instance 2 precedes instance 4.
        let anns: Vec<(u64, u64, u64)> = sets
            .train
            .annotations
            .iter()
            .map(|a| (a.id, a.image_id, a.category_id))
            .collect();
        assert_eq!(anns, [(1, 2, 1), (2, 2, 2)]);
        assert_eq!(sets.val.annotations[0].id, 3);
        assert_eq!(sets.train.categories, sets.test.categories);
        assert_eq!(sets.train.categories[0].name, "barrel");
        assert_eq!(
            sets.train.annotations[1].segmentation,
            vec![vec![0.0, 0.0, 6.0, 0.0, 6.0, 6.0, 0.0, 6.0]]
        );
    }

    #[test]
    fn cutoff_counts_train_images() {
        let mut frames = Vec::new();
        for t in 0..100 {
            let mut inst = vec![blob(0, "imp", 0, 6, 6)];
            if t < 99 {
                inst.push(blob(1, "demon", 10, 6, 6));
            }
            frames.push(frame(1, "MAP01", t, inst));
        }
        frames.push(frame(
            2,
            "MAP01",
            0,
            vec![blob(0, "imp", 0, 6, 6), blob(1, "demon", 10, 6, 6)],
        ));
        let sets = assemble(frames, &cfg(100)).unwrap();
        for s in Split::ALL {
            let ds = sets.get(s);
            assert_eq!(ds.categories.len(), 1);
            assert_eq!(ds.categories[0].id, 1);
            assert_eq!(ds.categories[0].name, "imp");
            assert!(ds.annotations.iter().all(|a| a.category_id == 1));
        }
        assert_eq!(sets.val.annotations.len(), 1);
        assert_eq!(sets.train.images.len(), 100);
    }

    #[test]
    fn filter_is_idempotent() {
        let frames = (0..10)
            .map(|t| {
                let mut v = vec![blob(0, "imp", 0, 6, 6)];
                if t % 2 == 0 {
                    v.push(blob(1, "zed", 10, 6, 6));
                }
                if t < 3 {
                    v.push(blob(2, "arch", 20, 6, 6));
                }
                frame(1, "MAP01", t, v)
            })
            .collect();
        let once = assemble(frames, &cfg(5)).unwrap();
        assert_eq!(
            once.train
                .categories
                .iter()
                .map(|c| c.name.as_str())
                .collect::<Vec<_>>(),
            ["imp", "zed"]
        );
        let twice = filter_categories(once.clone(), 5);
        assert_eq!(once, twice);
    }

    #[test]
    fn unmapped_run() {
        let frames = vec![frame(7, "MAP01", 0, vec![])];
        assert!(matches!(
            assemble(frames, &cfg(1)),
            Err(CocoError::UnmappedImage { run: 7, .. })
        ));
    }

    const NAMES: [&str; 4] = ["arch", "imp", "demon", "zombie"];

    /// A frame described as (run, tic, [(category index, size)]).
    type FrameDef = (u32, u32, Vec<(usize, u32)>);

    fn arb_frames() -> impl Strategy<Value = Vec<FrameDef>> {
        proptest::collection::vec(
            (
                1u32..=3,
                0u32..40,
                proptest::collection::vec((0usize..4, 3u32..9), 0..4),
            ),
            0..40,
        )
    }

    fn build(spec: &[FrameDef]) -> Vec<FrameAnnotations> {
        let mut seen = BTreeSet::new();
        spec.iter()
            .filter(|(run, tic, _)| seen.insert((*run, *tic)))
            .map(|(run, tic, inst)| {
                let obs = inst
                    .iter()
                    .enumerate()
                    .map(|(i, &(c, size))| blob(i as u32, NAMES[c], i as u32 * 10, size, size))
                    .collect();
                frame(*run, "MAP01", *tic, obs)
            })
            .collect()
    }

    fn names(ds: &CocoDataset) -> Vec<String> {
        ds.categories.iter().map(|c| c.name.clone()).collect()
    }

    proptest! {
        #[test]
        fn every_image_lands_in_one_split(spec in arb_frames()) {
            let frames = build(&spec);
            let sets = assemble(frames.clone(), &cfg(0)).unwrap();
            let mut ids: Vec<u64> = Split::ALL.iter().flat_map(|&s| sets.get(s).images.iter().map(|i| i.id)).collect();
            ids.sort_unstable();
            prop_assert_eq!(ids, (1..=frames.len() as u64).collect::<Vec<_>>());
        }

        #[test]
        fn category_filter_is_idempotent(spec in arb_frames(), min in 0usize..6) {
            let once = assemble(build(&spec), &cfg(min)).unwrap();
            prop_assert_eq!(filter_categories(once.clone(), min), once);
        }

        #[test]
        // At threshold 0 every category is kept, including val-only ones.
        fn val_and_test_do_not_move_the_cutoff(spec in arb_frames(), extra in arb_frames(), min in 1usize..6) {
            let base = assemble(build(&spec), &cfg(min)).unwrap();
            let mut more = spec.clone();
            more.extend(extra.into_iter().filter(|(run, _, _)| *run != 1).map(|(run, tic, i)| (run, tic + 100, i)));
            let grown = assemble(build(&more), &cfg(min)).unwrap();
            prop_assert_eq!(names(&base.train), names(&grown.train));
        }

        #[test]
        fn adding_frames_keeps_existing_annotations(spec in arb_frames(), extra in arb_frames()) {
            let key = |sets: &SplitDatasets| -> BTreeSet<(String, Vec<Vec<i64>>)> {
                let mut out = BTreeSet::new();
                for s in Split::ALL {
                    let ds = sets.get(s);
                    for a in &ds.annotations {
                        let img = ds.images.iter().find(|i| i.id == a.image_id).unwrap();
                        let segs = a.segmentation.iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect();
                        out.insert((img.file_name.clone(), segs));
                    }
                }
                out
            };
            let base = assemble(build(&spec), &cfg(0)).unwrap();
            let mut more = spec.clone();
            more.extend(extra.into_iter().map(|(run, tic, i)| (run, tic + 100, i)));
            let grown = assemble(build(&more), &cfg(0)).unwrap();
            prop_assert!(key(&base).is_subset(&key(&grown)));
        }
    }
}
