import { HttpApi } from './api.js';
import { renderGroupList } from './groupList.js';
import { loadTraceView } from './traceView.js';

declare global {
  interface Window {
    TRACELIGHT_API?: string;
  }
}

const api = new HttpApi(window.TRACELIGHT_API ?? '');
const root = document.getElementById('app') as HTMLElement;

function openGroup(groupId: string): void {
  window.location.hash = `#/groups/${groupId}`;
}

function openList(): void {
  window.location.hash = '#/';
}

function route(): void {
  const hash = window.location.hash;
  const match = hash.match(/^#\/groups\/([^/]+)$/);
  if (match) {
    void loadTraceView(root, api, decodeURIComponent(match[1]), { onBack: openList });
  } else {
    void renderGroupList(root, api, { onOpen: openGroup });
  }
}

window.addEventListener('hashchange', route);
route();
