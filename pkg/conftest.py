import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "borelsim.settings")
django.setup()
