/**
 * Queue view state.
 *
 * The state is a pure projection of server responses plus in-flight form
 * fields; a hard refresh reconstructs the same view from the API. All
 * transitions are pure functions over QueueView so they can be tested
 * without a DOM.
 */

import type { QueueItem, QueuePage } from "./api.js";

export type Tab = "queue" | "item" | "report";

export interface QueueView {
  tab: Tab;
  page: QueuePage | null;
  categoryFilter: string | null;
  pageNumber: number;
  activeItem: QueueItem | null;
  // blocks duplicate posts while one is in flight
  pendingSubmission: boolean;
  error: string | null;
}

export function initialView(): QueueView {
  return {
    tab: "queue",
    page: null,
    categoryFilter: null,
    pageNumber: 1,
    activeItem: null,
    pendingSubmission: false,
    error: null,
  };
}

export function withQueuePage(view: QueueView, page: QueuePage): QueueView {
  return { ...view, page, pageNumber: page.page, error: null };
}

export function openItem(view: QueueView, item: QueueItem): QueueView {
  return { ...view, tab: "item", activeItem: item, error: null };
}

export function setFilter(view: QueueView, category: string | null): QueueView {
  return { ...view, categoryFilter: category, pageNumber: 1 };
}

export function switchTab(view: QueueView, tab: Tab): QueueView {
  return { ...view, tab, error: null };
}

/** Returns null while a submission is pending: the caller must not post. */
export function beginSubmission(view: QueueView): QueueView | null {
  if (view.pendingSubmission) return null;
  return { ...view, pendingSubmission: true, error: null };
}

export function submissionSucceeded(view: QueueView, refreshed: QueueItem): QueueView {
  return { ...view, pendingSubmission: false, activeItem: refreshed, error: null };
}

export function submissionFailed(view: QueueView, message: string): QueueView {
  // state otherwise unchanged so the annotator can correct and retry
  return { ...view, pendingSubmission: false, error: message };
}

/** The next queue item after the active one, or null at the end of the page. */
export function nextItem(view: QueueView): QueueItem | null {
  if (!view.page || !view.activeItem) return null;
  const ids = view.page.items.map((i) => i.flag.item_id);
  const at = ids.indexOf(view.activeItem.flag.item_id);
  if (at === -1 || at + 1 >= view.page.items.length) return null;
  return view.page.items[at + 1];
}

/** Latest POS/NEG badge for a token, derived from the annotation log order. */
export function polarityBadge(item: QueueItem, tokenIndex: number): "POS" | "NEG" | null {
  let badge: "POS" | "NEG" | null = null;
  for (const a of item.current_annotations) {
    if (a.kind === "polarity_tag" && a.token_index === tokenIndex && a.polarity) {
      badge = a.polarity;
    }
  }
  return badge;
}

/** Latest post-edited reference, if any. */
export function latestPostEdit(item: QueueItem): string | null {
  let text: string | null = null;
  for (const a of item.current_annotations) {
    if (a.kind === "post_edit" && a.edited_target !== undefined) {
      text = a.edited_target;
    }
  }
  return text;
}

export function validatePostEdit(text: string): string | null {
  if (text.trim() === "") return "post-edit text must not be empty";
  return null;
}
