//! DoomEd thing types: sprite used to draw them and default category name.

/// Static description of one DoomEd thing type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThingInfo {
    pub doomed_type: u16,
    /// Four-letter sprite prefix; empty for things that are never drawn.
    pub sprite: &'static str,
    /// Frame letter of the spawn state.
    pub frame: u8,
    pub name: &'static str,
}

const fn t(doomed_type: u16, sprite: &'static str, frame: u8, name: &'static str) -> ThingInfo {
    ThingInfo {
        doomed_type,
        sprite,
        frame,
        name,
    }
}

/// Doom and Doom II thing types, sorted by type number.
pub static THING_TYPES: &[ThingInfo] = &[
    // Player starts and markers have no visible body here: the camera is
    // the player.
    t(1, "", b'A', "player1start"),
    t(2, "", b'A', "player2start"),
    t(3, "", b'A', "player3start"),
    t(4, "", b'A', "player4start"),
    t(5, "BKEY", b'A', "bluecard"),
    t(6, "YKEY", b'A', "yellowcard"),
    t(7, "SPID", b'A', "spider"),
    t(8, "BPAK", b'A', "backpack"),
    t(9, "SPOS", b'A', "shotguy"),
    t(10, "PLAY", b'W', "gibs"),
    t(11, "", b'A', "deathmatchstart"),
    t(12, "PLAY", b'W', "gibs2"),
    t(13, "RKEY", b'A', "redcard"),
    t(14, "", b'A', "teleportdest"),
    t(15, "PLAY", b'N', "deadplayer"),
    t(16, "CYBR", b'A', "cyborg"),
    t(17, "CELP", b'A', "cellpack"),
    t(18, "POSS", b'L', "deadpossessed"),
    t(19, "SPOS", b'L', "deadshotguy"),
    t(20, "TROO", b'M', "deadtroop"),
    t(21, "SARG", b'N', "deadsergeant"),
    t(22, "HEAD", b'L', "deadhead"),
    t(23, "SKUL", b'K', "deadskull"),
    t(24, "POL5", b'A', "poolofblood"),
    t(25, "POL1", b'A', "impaledhuman"),
    t(26, "POL6", b'A', "twitchimpaled"),
    t(27, "POL4", b'A', "skullonpole"),
    t(28, "POL2", b'A', "skullkebab"),
    t(29, "POL3", b'A', "skullpile"),
    t(30, "COL1", b'A', "tallgreencolumn"),
    t(31, "COL2", b'A', "shortgreencolumn"),
    t(32, "COL3", b'A', "tallredcolumn"),
    t(33, "COL4", b'A', "shortredcolumn"),
    t(34, "CAND", b'A', "candle"),
    t(35, "CBRA", b'A', "candelabra"),
    t(36, "COL5", b'A', "heartcolumn"),
    t(37, "COL6", b'A', "skullcolumn"),
    t(38, "RSKU", b'A', "redskull"),
    t(39, "YSKU", b'A', "yellowskull"),
    t(40, "BSKU", b'A', "blueskull"),
    t(41, "CEYE", b'A', "evileye"),
    t(42, "FSKU", b'A', "floatingskull"),
    t(43, "TRE1", b'A', "burnttree"),
    t(44, "TBLU", b'A', "tallbluetorch"),
    t(45, "TGRN", b'A', "tallgreentorch"),
    t(46, "TRED", b'A', "tallredtorch"),
    t(47, "SMIT", b'A', "stalagmite"),
    t(48, "ELEC", b'A', "techcolumn"),
    t(49, "GOR1", b'A', "hangingtwitch"),
    t(50, "GOR2", b'A', "hangingarmsout"),
    t(51, "GOR3", b'A', "hangingonelegged"),
    t(52, "GOR4", b'A', "hangingtorso"),
    t(53, "GOR5", b'A', "hangingleg"),
    t(54, "TRE2", b'A', "bigtree"),
    t(55, "SMBT", b'A', "shortbluetorch"),
    t(56, "SMGT", b'A', "shortgreentorch"),
    t(57, "SMRT", b'A', "shortredtorch"),
    t(58, "SARG", b'A', "shadows"),
    t(59, "GOR2", b'A', "hangingarmsout2"),
    t(60, "GOR4", b'A', "hangingtorso2"),
    t(61, "GOR3", b'A', "hangingonelegged2"),
    t(62, "GOR5", b'A', "hangingleg2"),
    t(63, "GOR1", b'A', "hangingtwitch2"),
    t(64, "VILE", b'A', "vile"),
    t(65, "CPOS", b'A', "chainguy"),
    t(66, "SKEL", b'A', "undead"),
    t(67, "FATT", b'A', "fatso"),
    t(68, "BSPI", b'A', "baby"),
    t(69, "BOS2", b'A', "knight"),
    t(70, "FCAN", b'A', "burningbarrel"),
    t(71, "PAIN", b'A', "pain"),
    t(72, "KEEN", b'A', "keen"),
    t(73, "HDB1", b'A', "hangingnoguts"),
    t(74, "HDB2", b'A', "hangingnobrain"),
    t(75, "HDB3", b'A', "hanginglookingdown"),
    t(76, "HDB4", b'A', "hangingopenskull"),
    t(77, "HDB5", b'A', "hanginglookingup"),
    t(78, "HDB6", b'A', "hangingbrainremoved"),
    t(79, "POB1", b'A', "poolofblood2"),
    t(80, "POB2", b'A', "poolofblood3"),
    t(81, "BRS1", b'A', "poolofbrains"),
    t(82, "SGN2", b'A', "supershotgun"),
    t(83, "MEGA", b'A', "megasphere"),
    t(84, "SSWV", b'A', "wolfss"),
    t(85, "TLMP", b'A', "talltechlamp"),
    t(86, "TLP2", b'A', "shorttechlamp"),
    t(87, "", b'A', "bosstarget"),
    t(88, "BBRN", b'A', "bossbrain"),
    t(89, "", b'A', "bossspawner"),
    t(2001, "SHOT", b'A', "shotgun"),
    t(2002, "MGUN", b'A', "chaingun"),
    t(2003, "LAUN", b'A', "rocketlauncher"),
    t(2004, "PLAS", b'A', "plasmarifle"),
    t(2005, "CSAW", b'A', "chainsaw"),
    t(2006, "BFUG", b'A', "bfg9000"),
    t(2007, "CLIP", b'A', "clip"),
    t(2008, "SHEL", b'A', "shells"),
    t(2010, "ROCK", b'A', "rocket"),
    t(2011, "STIM", b'A', "stimpack"),
    t(2012, "MEDI", b'A', "medikit"),
    t(2013, "SOUL", b'A', "soulsphere"),
    t(2014, "BON1", b'A', "healthbonus"),
    t(2015, "BON2", b'A', "armorbonus"),
    t(2018, "ARM1", b'A', "greenarmor"),
    t(2019, "ARM2", b'A', "bluearmor"),
    t(2022, "PINV", b'A', "invulnerability"),
    t(2023, "PSTR", b'A', "berserk"),
    t(2024, "PINS", b'A', "invisibility"),
    t(2025, "SUIT", b'A', "radsuit"),
    t(2026, "PMAP", b'A', "computermap"),
    t(2028, "COLU", b'A', "floorlamp"),
    t(2035, "BAR1", b'A', "barrel"),
    t(2045, "PVIS", b'A', "lightamp"),
    t(2046, "BROK", b'A', "rocketbox"),
    t(2047, "CELL", b'A', "cell"),
    t(2048, "AMMO", b'A', "bulletbox"),
    t(2049, "SBOX", b'A', "shellbox"),
    t(3001, "TROO", b'A', "troop"),
    t(3002, "SARG", b'A', "sergeant"),
    t(3003, "BOSS", b'A', "bruiser"),
    t(3004, "POSS", b'A', "possessed"),
    t(3005, "HEAD", b'A', "head"),
    t(3006, "SKUL", b'A', "skull"),
];

pub fn thing_info(doomed_type: u16) -> Option<&'static ThingInfo> {
    THING_TYPES
        .binary_search_by_key(&doomed_type, |t| t.doomed_type)
        .ok()
        .map(|i| &THING_TYPES[i])
}
