/**
 * Viewer script embedded into woven ontology pages.
 *
 * The state transformations at the top are pure and covered by tests; the
 * DOM glue at the bottom only runs when a document with an `ow-manifest`
 * data block is present.
 */

export interface ViewerState {
  readonly hiddenChunks: ReadonlySet<number>;
  readonly globalHidden: boolean;
  readonly activeLocale: string;
}

export interface ManifestEntity {
  name: string;
  kind: string;
  anchor: string;
  labels: Record<string, string>;
}

export interface Manifest {
  entities: ManifestEntity[];
  direction: "ltr" | "rtl";
}

export interface TocPosition {
  anchor: string;
  offset: number;
}

export const initialState: ViewerState = {
  hiddenChunks: new Set<number>(),
  globalHidden: false,
  activeLocale: "",
};

/** Flip one chunk's hidden flag; unknown ids leave the state unchanged. */
export function toggleChunk(
  state: ViewerState,
  id: number,
  validIds: ReadonlySet<number>,
): ViewerState {
  if (!validIds.has(id)) {
    return state;
  }
  const hidden = new Set(state.hiddenChunks);
  if (hidden.has(id)) {
    hidden.delete(id);
  } else {
    hidden.add(id);
  }
  return { hiddenChunks: hidden, globalHidden: state.globalHidden, activeLocale: state.activeLocale };
}

export function toggleAll(state: ViewerState): ViewerState {
  return {
    hiddenChunks: state.hiddenChunks,
    globalHidden: !state.globalHidden,
    activeLocale: state.activeLocale,
  };
}

/** Effective visibility: visible unless globally hidden or singled out. */
export function isChunkVisible(state: ViewerState, id: number): boolean {
  return !(state.globalHidden || state.hiddenChunks.has(id));
}

/**
 * Display text per anchor for a locale: the entity's label when one exists,
 * otherwise its original name. The empty locale always shows names.
 */
export function displayNames(manifest: Manifest, locale: string): Record<string, string> {
  const mapping: Record<string, string> = {};
  for (const entity of manifest.entities) {
    const label = locale ? entity.labels[locale] : undefined;
    mapping[entity.anchor] = label !== undefined && label !== "" ? label : entity.name;
  }
  return mapping;
}

/** Record the locale choice and compute what each entity should show. */
export function setLocale(
  state: ViewerState,
  manifest: Manifest,
  locale: string,
): { state: ViewerState; display: Record<string, string> } {
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
export function activeTocEntry(entries: readonly TocPosition[], scrollOffset: number): string {
  let current = entries[0].anchor;
  for (const entry of entries) {
    if (entry.offset <= scrollOffset) {
      current = entry.anchor;
    }
  }
  return current;
}

// --- DOM glue ---

function wireDocument(): void {
  const manifestEl = document.getElementById("ow-manifest");
  if (!manifestEl) {
    return;
  }
  const manifest: Manifest = JSON.parse(manifestEl.textContent || "{}");

  const chunkIds = new Set<number>();
  const pres: Record<number, HTMLElement | null> = {};
  const buttons: Record<number, HTMLElement | null> = {};
  document.querySelectorAll("section.source").forEach((section) => {
    const id = parseInt(section.id.replace("chunk-", ""), 10);
    chunkIds.add(id);
    pres[id] = section.querySelector("pre");
    buttons[id] = section.querySelector(".ow-toggle");
  });

  let state: ViewerState = initialState;
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

  const select = document.getElementById("ow-locale-select") as HTMLSelectElement | null;
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
    const entries: TocPosition[] = [];
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
