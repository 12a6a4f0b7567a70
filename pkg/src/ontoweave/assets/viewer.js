"use strict";
(function (exports) {
/**
 * Viewer script embedded into woven ontology pages.
 *
 * The state transformations at the top are pure and covered by tests; the
 * DOM glue at the bottom only runs when a document with an `ow-manifest`
 * data block is present.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.initialState = void 0;
exports.toggleChunk = toggleChunk;
exports.toggleAll = toggleAll;
exports.isChunkVisible = isChunkVisible;
exports.displayNames = displayNames;
exports.setLocale = setLocale;
exports.activeTocEntry = activeTocEntry;
exports.initialState = {
    hiddenChunks: new Set(),
    globalHidden: false,
    activeLocale: "",
};
/** Flip one chunk's hidden flag; unknown ids leave the state unchanged. */
function toggleChunk(state, id, validIds) {
    if (!validIds.has(id)) {
        return state;
    }
    const hidden = new Set(state.hiddenChunks);
    if (hidden.has(id)) {
        hidden.delete(id);
    }
    else {
        hidden.add(id);
    }
    return { hiddenChunks: hidden, globalHidden: state.globalHidden, activeLocale: state.activeLocale };
}
function toggleAll(state) {
    return {
        hiddenChunks: state.hiddenChunks,
        globalHidden: !state.globalHidden,
        activeLocale: state.activeLocale,
    };
}
/** Effective visibility: visible unless globally hidden or singled out. */
function isChunkVisible(state, id) {
    return !(state.globalHidden || state.hiddenChunks.has(id));
}
/**
 * Display text per anchor for a locale: the entity's label when one exists,
 * otherwise its original name. The empty locale always shows names.
 */
function displayNames(manifest, locale) {
    const mapping = {};
    for (const entity of manifest.entities) {
        const label = locale ? entity.labels[locale] : undefined;
        mapping[entity.anchor] = label !== undefined && label !== "" ? label : entity.name;
    }
    return mapping;
}
/** Record the locale choice and compute what each entity should show. */
function setLocale(state, manifest, locale) {
    return {
        state: {
            hiddenChunks: state.hiddenChunks,
            globalHidden: state.globalHidden,
            activeLocale: locale,
        },
        display: displayNames(manifest, locale),
    };
}
/**
 * The entry the reader is currently in: the last one at or above the scroll
 * offset, or the first entry before any offset is reached. Offsets must be
 * ascending.
 */
function activeTocEntry(entries, scrollOffset) {
    let current = entries[0].anchor;
    for (const entry of entries) {
        if (entry.offset <= scrollOffset) {
            current = entry.anchor;
        }
    }
    return current;
}
// --- DOM glue ---
function wireDocument() {
    const manifestEl = document.getElementById("ow-manifest");
    if (!manifestEl) {
        return;
    }
    const manifest = JSON.parse(manifestEl.textContent || "{}");
    const chunkIds = new Set();
    const pres = {};
    const buttons = {};
    document.querySelectorAll("section.source").forEach((section) => {
        const id = parseInt(section.id.replace("chunk-", ""), 10);
        chunkIds.add(id);
        pres[id] = section.querySelector("pre");
        buttons[id] = section.querySelector(".ow-toggle");
    });
    let state = exports.initialState;
    chunkIds.forEach((id) => {
        const pre = pres[id];
        if (pre && pre.hidden) {
            state = toggleChunk(state, id, chunkIds);
        }
    });
    const applyVisibility = () => {
        chunkIds.forEach((id) => {
            const visible = isChunkVisible(state, id);
            const pre = pres[id];
            const button = buttons[id];
            if (pre) {
                pre.hidden = !visible;
            }
            if (button) {
                button.textContent = visible ? "hide source" : "show source";
            }
        });
        const all = document.getElementById("ow-toggle-all");
        if (all) {
            all.textContent = state.globalHidden ? "show all source" : "hide all source";
        }
    };
    document.querySelectorAll(".ow-toggle").forEach((button) => {
        button.addEventListener("click", () => {
            const id = parseInt(button.getAttribute("data-chunk") || "", 10);
            state = toggleChunk(state, id, chunkIds);
            applyVisibility();
        });
    });
    const allButton = document.getElementById("ow-toggle-all");
    if (allButton) {
        allButton.addEventListener("click", () => {
            state = toggleAll(state);
            applyVisibility();
        });
    }
    const select = document.getElementById("ow-locale-select");
    if (select) {
        select.addEventListener("change", () => {
            const update = setLocale(state, manifest, select.value);
            state = update.state;
            document.querySelectorAll(".ow-entity").forEach((el) => {
                const anchor = el.getAttribute("data-anchor") || "";
                const fallback = el.getAttribute("data-name") || el.textContent || "";
                const shown = update.display[anchor];
                el.textContent = shown !== undefined ? shown : fallback;
            });
        });
    }
    const tocLinks = Array.from(document.querySelectorAll(".ow-toc-link"));
    const highlight = () => {
        const entries = [];
        for (const link of tocLinks) {
            const anchor = (link.getAttribute("href") || "").slice(1);
            const target = document.getElementById(anchor);
            if (target) {
                entries.push({ anchor, offset: target.offsetTop });
            }
        }
        if (entries.length === 0) {
            return;
        }
        entries.sort((a, b) => a.offset - b.offset);
        const active = activeTocEntry(entries, window.scrollY);
        for (const link of tocLinks) {
            const anchor = (link.getAttribute("href") || "").slice(1);
            link.classList.toggle("active", anchor === active);
        }
    };
    window.addEventListener("scroll", highlight);
    highlight();
    applyVisibility();
}
if (typeof document !== "undefined" && document.getElementById("ow-manifest")) {
    wireDocument();
}
})(typeof module !== "undefined" && module.exports ? module.exports : {});
