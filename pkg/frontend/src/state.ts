// Workspace state for the two-pane UI: which sidebar tab is active, the
// current editor selection, card collapse states, and unsaved persona form
// drafts (kept across tab switches).

import type { Pair, SectionName, Selection } from "./api.js";
import { SECTION_NAMES } from "./api.js";

export type SidebarTab = { kind: "history" } | { kind: "persona"; personaId: string };

export interface PersonaDraft {
  name: string;
  sections: Record<SectionName, Pair[]>;
}

export function emptyDraft(name = ""): PersonaDraft {
  const sections = {} as Record<SectionName, Pair[]>;
  for (const s of SECTION_NAMES) {
    sections[s] = [];
  }
  return { name, sections };
}

export class WorkspaceState {
  activeTab: SidebarTab = { kind: "history" };
  selection: Selection | null = null;
  documentText = "";
  private collapsed = new Map<string, boolean>();
  private drafts = new Map<string, PersonaDraft>();

  setDocumentText(text: string): void {
    this.documentText = text;
    if (this.selection && !this.selectionValid(this.selection)) {
      this.selection = null;
    }
  }

  selectionValid(sel: Selection): boolean {
    return sel.start >= 0 && sel.end <= this.documentText.length && sel.start < sel.end;
  }

  setSelection(sel: Selection | null): void {
    this.selection = sel && this.selectionValid(sel) ? sel : null;
  }

  get hasSelection(): boolean {
    return this.selection !== null;
  }

  openTab(tab: SidebarTab): void {
    this.activeTab = tab;
  }

  isCollapsed(cardId: string): boolean {
    return this.collapsed.get(cardId) ?? true;
  }

  toggleCard(cardId: string): void {
    this.collapsed.set(cardId, !this.isCollapsed(cardId));
  }

  forgetCard(cardId: string): void {
    this.collapsed.delete(cardId);
  }

  // Persona form drafts survive tab switches until explicitly cleared.
  draftFor(personaId: string): PersonaDraft {
    let d = this.drafts.get(personaId);
    if (!d) {
      d = emptyDraft();
      this.drafts.set(personaId, d);
    }
    return d;
  }

  setDraft(personaId: string, draft: PersonaDraft): void {
    this.drafts.set(personaId, draft);
  }

  clearDraft(personaId: string): void {
    this.drafts.delete(personaId);
  }

  hasDraft(personaId: string): boolean {
    return this.drafts.has(personaId);
  }
}
